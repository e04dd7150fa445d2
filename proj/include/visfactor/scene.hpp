#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "visfactor/geometry.hpp"
#include "visfactor/image.hpp"

namespace visfactor {

/// Logical canvas size every generator draws on; strokes are specified in
/// these units and scale with the output resolution.
inline constexpr double kCanvas = 600.0;
inline constexpr double kStroke = 3.0;

struct LineShape {
  std::vector<geom::Point> points;
  double width = kStroke;
  std::uint8_t color = 0;
  bool closed = false;
  bool dashed = false;
};

struct CircleShape {
  geom::Point center;
  double radius = 0;
  double width = kStroke;  // 0 = no outline
  std::uint8_t color = 0;
  std::optional<std::uint8_t> fill;
};

struct PolygonShape {
  std::vector<geom::Point> points;
  std::optional<std::uint8_t> fill = std::uint8_t{0};
  double width = 0;  // outline width, 0 = none
  std::uint8_t color = 0;
};

enum class TileBlend { replace, darken };

/// Raster tile mapped by the affine frame: tile pixel (0,0) lands on origin,
/// (w,0) on origin + u and (0,h) on origin + v.
struct TileShape {
  Image image;
  geom::Point origin;
  geom::Point u;
  geom::Point v;
  TileBlend blend = TileBlend::replace;
};

struct TextShape {
  std::string text;
  geom::Point center;
  double size = 36;  // glyph height in logical units
  double width = kStroke;
  std::uint8_t color = 0;
};

using Shape = std::variant<LineShape, CircleShape, PolygonShape, TileShape, TextShape>;

struct Primitive {
  Shape shape;
  int layer = 0;
};

/// Declarative drawing. Primitives paint in (layer, insertion) order on a
/// white background.
class Scene {
 public:
  static constexpr int kVersion = 1;

  Scene(double width = kCanvas, double height = kCanvas) : width_(width), height_(height) {}

  double width() const noexcept { return width_; }
  double height() const noexcept { return height_; }
  const std::vector<Primitive>& primitives() const noexcept { return items_; }

  Scene& add(Shape s, int layer = 0) {
    items_.push_back({std::move(s), layer});
    return *this;
  }
  Scene& line(geom::Point a, geom::Point b, double width = kStroke, std::uint8_t color = 0) {
    return add(LineShape{{a, b}, width, color});
  }
  Scene& text(std::string s, geom::Point center, double size, double width = kStroke) {
    return add(TextShape{std::move(s), center, size, width, 0});
  }
  /// Axis-aligned tile occupying [x, x+w] x [y, y+h].
  Scene& tile(Image img, double x, double y, double w, double h, TileBlend blend = TileBlend::replace) {
    return add(TileShape{std::move(img), {x, y}, {w, 0}, {0, h}, blend});
  }

 private:
  double width_;
  double height_;
  std::vector<Primitive> items_;
};

/// Rasterizes the scene; identical input gives byte-identical output.
/// Throws InvalidArgument for a zero-area canvas.
Image render(const Scene& scene, int width_px, int height_px);
inline Image render(const Scene& scene) {
  return render(scene, static_cast<int>(scene.width()), static_cast<int>(scene.height()));
}

/// Versioned structured-text form used for golden tests and sidecars.
nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

/// Ink extent (width, height) of `text` drawn at glyph size `size` with
/// stroke `width`, in logical units at scale 1.
geom::Point text_extent(const std::string& text, double size, double width = kStroke);

std::string scene_to_svg(const Scene& scene, int width_px, int height_px);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace visfactor
