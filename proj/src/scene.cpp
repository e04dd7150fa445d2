#include <algorithm>
#include <cstring>
#include <sstream>

#include <fmt/format.h>

#include "visfactor/error.hpp"
#include "visfactor/scene.hpp"

namespace visfactor {
namespace {

using nlohmann::json;

json point_json(geom::Point p) { return json::array({p.x, p.y}); }
geom::Point json_point(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json points_json(const std::vector<geom::Point>& pts) {
  json a = json::array();
  for (auto p : pts) a.push_back(point_json(p));
  return a;
}

std::vector<geom::Point> json_points(const json& j) {
  std::vector<geom::Point> pts;
  for (const auto& p : j) pts.push_back(json_point(p));
  return pts;
}

json shape_json(const LineShape& s) {
  return {{"type", "line"}, {"points", points_json(s.points)}, {"width", s.width},
          {"color", s.color}, {"closed", s.closed}, {"dashed", s.dashed}};
}
json shape_json(const CircleShape& s) {
  json j{{"type", "circle"}, {"center", point_json(s.center)}, {"radius", s.radius},
         {"width", s.width}, {"color", s.color}};
  j["fill"] = s.fill ? json(*s.fill) : json(nullptr);
  return j;
}
json shape_json(const PolygonShape& s) {
  json j{{"type", "polygon"}, {"points", points_json(s.points)}, {"width", s.width}, {"color", s.color}};
  j["fill"] = s.fill ? json(*s.fill) : json(nullptr);
  return j;
}
json shape_json(const TileShape& s) {
  return {{"type", "tile"},
          {"origin", point_json(s.origin)},
          {"u", point_json(s.u)},
          {"v", point_json(s.v)},
          {"blend", s.blend == TileBlend::replace ? "replace" : "darken"},
          {"png", base64_encode(encode_png(s.image))}};
}
json shape_json(const TextShape& s) {
  return {{"type", "text"}, {"text", s.text}, {"center", point_json(s.center)},
          {"size", s.size}, {"width", s.width}, {"color", s.color}};
}

std::optional<std::uint8_t> json_fill(const json& j) {
  if (!j.contains("fill") || j["fill"].is_null()) return std::nullopt;
  return j["fill"].get<std::uint8_t>();
}

Shape json_shape(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "line")
    return LineShape{json_points(j.at("points")), j.at("width").get<double>(), j.at("color").get<std::uint8_t>(),
                     j.at("closed").get<bool>(), j.at("dashed").get<bool>()};
  if (type == "circle")
    return CircleShape{json_point(j.at("center")), j.at("radius").get<double>(), j.at("width").get<double>(),
                       j.at("color").get<std::uint8_t>(), json_fill(j)};
  if (type == "polygon")
    return PolygonShape{json_points(j.at("points")), json_fill(j), j.at("width").get<double>(),
                        j.at("color").get<std::uint8_t>()};
  if (type == "tile")
    return TileShape{decode_png(base64_decode(j.at("png").get<std::string>())), json_point(j.at("origin")),
                     json_point(j.at("u")), json_point(j.at("v")),
                     j.at("blend").get<std::string>() == "darken" ? TileBlend::darken : TileBlend::replace};
  if (type == "text")
    return TextShape{j.at("text").get<std::string>(), json_point(j.at("center")), j.at("size").get<double>(),
                     j.at("width").get<double>(), j.at("color").get<std::uint8_t>()};
  throw InvalidArgument("unknown scene primitive type: " + type);
}

std::string gray(std::uint8_t v) { return fmt::format("rgb({0},{0},{0})", v); }

std::string svg_points(const std::vector<geom::Point>& pts, double sx, double sy) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += fmt::format("{:.3f},{:.3f}", pts[i].x * sx, pts[i].y * sy);
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

}  // namespace

json scene_to_json(const Scene& scene) {
  json items = json::array();
  for (const auto& p : scene.primitives()) {
    json j = std::visit([](const auto& s) { return shape_json(s); }, p.shape);
    j["layer"] = p.layer;
    items.push_back(std::move(j));
  }
  return {{"version", Scene::kVersion}, {"width", scene.width()}, {"height", scene.height()}, {"primitives", items}};
}

Scene scene_from_json(const json& j) {
  if (j.at("version").get<int>() != Scene::kVersion)
    throw InvalidArgument("unsupported scene version " + j.at("version").dump());
  Scene scene(j.at("width").get<double>(), j.at("height").get<double>());
  for (const auto& p : j.at("primitives")) scene.add(json_shape(p), p.value("layer", 0));
  return scene;
}

std::string scene_to_svg(const Scene& scene, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0) throw InvalidArgument("svg: canvas must have positive area");
  const double sx = width_px / scene.width(), sy = height_px / scene.height(), sw = 0.5 * (sx + sy);
  std::ostringstream out;
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      width_px, height_px);
  std::vector<const Primitive*> order;
  for (const auto& p : scene.primitives()) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->layer < b->layer; });
  for (const Primitive* p : order) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LineShape>) {
            out << fmt::format("<{} points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3f}\"{}/>\n",
                               s.closed ? "polygon" : "polyline", svg_points(s.points, sx, sy), gray(s.color),
                               s.width * sw,
                               s.dashed ? fmt::format(" stroke-dasharray=\"{:.3f}\"", 4 * s.width * sw) : "");
          } else if constexpr (std::is_same_v<T, CircleShape>) {
            out << fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"{}\" stroke=\"{}\" "
                               "stroke-width=\"{:.3f}\"/>\n",
                               s.center.x * sx, s.center.y * sy, s.radius * sw, s.fill ? gray(*s.fill) : "none",
                               s.width > 0 ? gray(s.color) : "none", s.width * sw);
          } else if constexpr (std::is_same_v<T, PolygonShape>) {
            out << fmt::format("<polygon points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{:.3f}\"/>\n",
                               svg_points(s.points, sx, sy), s.fill ? gray(*s.fill) : "none",
                               s.width > 0 ? gray(s.color) : "none", s.width * sw);
          } else if constexpr (std::is_same_v<T, TileShape>) {
            if (s.image.empty()) return;
            out << fmt::format(
                "<image width=\"{}\" height=\"{}\" transform=\"matrix({:.6f} {:.6f} {:.6f} {:.6f} {:.3f} {:.3f})\" "
                "style=\"image-rendering:pixelated{}\" xlink:href=\"data:image/png;base64,{}\"/>\n",
                s.image.width, s.image.height, s.u.x * sx / s.image.width, s.u.y * sy / s.image.width,
                s.v.x * sx / s.image.height, s.v.y * sy / s.image.height, s.origin.x * sx, s.origin.y * sy,
                s.blend == TileBlend::darken ? ";mix-blend-mode:darken" : "", base64_encode(encode_png(s.image)));
          } else {
            out << fmt::format(
                "<text x=\"{:.3f}\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"{:.3f}\" fill=\"{}\" "
                "text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>\n",
                s.center.x * sx, s.center.y * sy, s.size * sw * 1.4, gray(s.color), xml_escape(s.text));
          }
        },
        p->shape);
  }
  out << "</svg>\n";
  return out.str();
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    if (i + 2 < bytes.size()) v |= bytes[i + 2];
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kB64[(v >> 6) & 63] : '=';
    out += i + 2 < bytes.size() ? kB64[v & 63] : '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const char* p = std::strchr(kB64, c);
    if (!p || !*p) throw InvalidArgument("invalid base64 character");
    acc = (acc << 6) | static_cast<std::uint32_t>(p - kB64);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace visfactor
