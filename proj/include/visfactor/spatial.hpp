#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "visfactor/geometry.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::spatial {

using geom::Point;

// ---- S1 card rotation ----

struct PolygonParams {
  int min_vertices = 6;
  int max_vertices = 8;
  double min_edge = 0.15;   // in units of the outer radius
  double diff_tol = 0.05;   // consecutive edge lengths differ by at least this
  double min_radius = 0.35;
};

/// Random simple polygon from i.i.d. polar radii and sorted angles, shifted so
/// its area centroid is the origin. Throws GenerationFailed after 1000 draws.
std::vector<Point> gen_polygon(const PolygonParams& p, SeededRng& rng);

bool polygon_ok(const std::vector<Point>& poly, const PolygonParams& p);
/// True when some line through the centroid maps the vertex set onto itself.
bool mirror_symmetric(const std::vector<Point>& poly, double tol = 1e-6);

/// Optional mirror x -> -x, then counter-clockwise rotation by `angle_deg`.
std::vector<Point> transform(const std::vector<Point>& poly, bool mirrored, double angle_deg);

struct S1View {
  bool mirrored = false;
  double angle_deg = 0;
  std::vector<Point> vertices;
  bool truth() const { return !mirrored; }
};

struct S1Question {
  std::vector<Point> base;
  std::vector<S1View> views;
};

/// Mirrored views keep at least 2 degrees away from 0 and 180.
S1View gen_s1_view(const std::vector<Point>& base, bool mirrored, SeededRng& rng);
S1Question gen_s1_question(const PolygonParams& p, int views, SeededRng& rng);

constexpr double kCardRadius = 200.0;
Scene polygon_scene(const std::vector<Point>& poly, double radius = kCardRadius);

nlohmann::json points_to_json(const std::vector<Point>& pts);
std::vector<Point> points_from_json(const nlohmann::json& j);

// ---- S2 cube comparison ----

enum class Symmetry { fourfold, twofold, asymmetric };

/// Alphabet with the symmetry class of every symbol.
const std::vector<std::pair<std::string, Symmetry>>& alphabet();
Symmetry symmetry_of(const std::string& symbol);

/// Symbol and quarter turns clockwise (seen from outside the face).
struct FaceMark {
  std::string symbol;
  int rotation = 0;
  friend bool operator==(const FaceMark&, const FaceMark&) = default;
};

struct CubeView {
  FaceMark up;
  FaceMark front;
  FaceMark right;
  friend bool operator==(const CubeView&, const CubeView&) = default;
};

bool view_valid(const CubeView& v);
/// Same symbol with rotations equal modulo the symbol's symmetry.
bool marks_equivalent(const FaceMark& a, const FaceMark& b);

/// Could both views show one cube whose faces carry six different symbols?
bool cube_same(const CubeView& v1, const CubeView& v2);

using Vec3 = std::array<int, 3>;

/// Six faces indexed by outward normal in the cube's own frame; `up` is the
/// direction the symbol's top points to.
struct Labeling {
  std::array<Vec3, 6> normal;
  std::array<std::string, 6> symbol;
  std::array<Vec3, 6> up;
};

/// Orientation index in [0, 24).
CubeView view_of(const Labeling& cube, int orientation);
int orientation_count();

struct S2Item {
  CubeView first;
  CubeView second;
  bool truth = false;
};

S2Item gen_s2_item(bool want_same, SeededRng& rng);

Scene cube_scene(const CubeView& v);

nlohmann::json to_json(const CubeView& v);
CubeView cube_view_from_json(const nlohmann::json& j);

}  // namespace visfactor::spatial
