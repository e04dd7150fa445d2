#include "visfactor/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "visfactor/error.hpp"

namespace visfactor::spatial {
namespace {

constexpr double kPi = std::numbers::pi;

double edge_len(const std::vector<Point>& p, std::size_t i) { return geom::distance(p[i], p[(i + 1) % p.size()]); }

Point reflect_line(Point p, Point dir) {
  // Reflection across the line through the origin with unit direction dir.
  const double d = geom::dot(p, dir);
  return 2 * d * dir - p;
}

}  // namespace

bool mirror_symmetric(const std::vector<Point>& poly, double tol) {
  const std::size_t n = poly.size();
  const Point c = geom::centroid(poly);
  std::vector<Point> q;
  for (auto p : poly) q.push_back(p - c);
  // A symmetry axis of a polygon passes through a vertex or an edge midpoint.
  std::vector<Point> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    dirs.push_back(q[i]);
    dirs.push_back(0.5 * (q[i] + q[(i + 1) % n]));
  }
  for (auto d : dirs) {
    const double len = std::hypot(d.x, d.y);
    if (len < 1e-12) continue;
    const Point u{d.x / len, d.y / len};
    bool all = true;
    for (auto p : q) {
      const Point r = reflect_line(p, u);
      if (std::none_of(q.begin(), q.end(), [&](Point v) { return geom::near(v, r, tol); })) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool polygon_ok(const std::vector<Point>& poly, const PolygonParams& p) {
  if (poly.size() < 4 || !geom::is_simple(poly)) return false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (edge_len(poly, i) < p.min_edge) return false;
    if (std::abs(edge_len(poly, i) - edge_len(poly, (i + 1) % poly.size())) < p.diff_tol) return false;
  }
  return !mirror_symmetric(poly);
}

std::vector<Point> gen_polygon(const PolygonParams& p, SeededRng& rng) {
  if (p.min_vertices < 4 || p.max_vertices < p.min_vertices) throw InvalidArgument("polygon needs at least 4 vertices");
  if (p.min_edge <= 0 || p.diff_tol <= 0 || p.min_radius <= 0 || p.min_radius > 1)
    throw InvalidArgument("polygon thresholds must be positive");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int n = static_cast<int>(rng.uniform_int(p.min_vertices, p.max_vertices));
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& a : angles) a = rng.uniform(0, 2 * kPi);
    std::sort(angles.begin(), angles.end());
    std::vector<Point> poly;
    for (double a : angles) {
      const double r = rng.uniform(p.min_radius, 1.0);
      poly.push_back({r * std::cos(a), r * std::sin(a)});
    }
    if (!polygon_ok(poly, p)) continue;
    const Point c = geom::centroid(poly);
    for (auto& v : poly) v = v - c;
    return poly;
  }
  throw GenerationFailed("S1 polygon rejection cap reached", rng.seed());
}

std::vector<Point> transform(const std::vector<Point>& poly, bool mirrored, double angle_deg) {
  const double a = angle_deg * kPi / 180, c = std::cos(a), s = std::sin(a);
  std::vector<Point> out;
  for (auto v : poly) {
    if (mirrored) v.x = -v.x;
    out.push_back({c * v.x - s * v.y, s * v.x + c * v.y});
  }
  return out;
}

S1View gen_s1_view(const std::vector<Point>& base, bool mirrored, SeededRng& rng) {
  double angle = rng.uniform(0, 360);
  if (mirrored) {
    // Keep mirrored views clear of the two angles where a nearly symmetric
    // card could look merely rotated.
    while (std::min(std::abs(std::fmod(angle, 180.0)), 180 - std::fmod(angle, 180.0)) < 2) angle = rng.uniform(0, 360);
  }
  return {mirrored, angle, transform(base, mirrored, angle)};
}

S1Question gen_s1_question(const PolygonParams& p, int views, SeededRng& rng) {
  if (views < 1) throw InvalidArgument("S1 needs at least one view");
  S1Question q{gen_polygon(p, rng), {}};
  for (int i = 0; i < views; ++i) q.views.push_back(gen_s1_view(q.base, rng.bernoulli(0.5), rng));
  return q;
}

Scene polygon_scene(const std::vector<Point>& poly, double radius) {
  Scene sc;
  std::vector<Point> pts;
  // Screen y grows downward; flip so counter-clockwise stays counter-clockwise.
  for (auto v : poly) pts.push_back({kCanvas / 2 + radius * v.x, kCanvas / 2 - radius * v.y});
  sc.add(PolygonShape{pts, std::uint8_t{0}});
  return sc;
}

nlohmann::json points_to_json(const std::vector<Point>& pts) {
  auto j = nlohmann::json::array();
  for (auto p : pts) j.push_back({p.x, p.y});
  return j;
}

std::vector<Point> points_from_json(const nlohmann::json& j) {
  std::vector<Point> out;
  for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

// ---- cubes ----

const std::vector<std::pair<std::string, Symmetry>>& alphabet() {
  static const std::vector<std::pair<std::string, Symmetry>> a{
      {"+", Symmetry::fourfold},   {"O", Symmetry::fourfold},   {"N", Symmetry::twofold},    {"S", Symmetry::twofold},
      {"Z", Symmetry::twofold},    {"H", Symmetry::twofold},    {"I", Symmetry::twofold},    {"X", Symmetry::twofold},
      {"A", Symmetry::asymmetric}, {"F", Symmetry::asymmetric}, {"G", Symmetry::asymmetric}, {"J", Symmetry::asymmetric},
      {"L", Symmetry::asymmetric}, {"P", Symmetry::asymmetric}, {"R", Symmetry::asymmetric}, {"2", Symmetry::asymmetric},
      {"4", Symmetry::asymmetric}, {"7", Symmetry::asymmetric}};
  return a;
}

Symmetry symmetry_of(const std::string& symbol) {
  for (const auto& [s, c] : alphabet())
    if (s == symbol) return c;
  throw InvalidArgument("unknown cube symbol '" + symbol + "'");
}

bool marks_equivalent(const FaceMark& a, const FaceMark& b) {
  if (a.symbol != b.symbol) return false;
  const int d = ((a.rotation - b.rotation) % 4 + 4) % 4;
  switch (symmetry_of(a.symbol)) {
    case Symmetry::fourfold: return true;
    case Symmetry::twofold: return d % 2 == 0;
    default: return d == 0;
  }
}

bool view_valid(const CubeView& v) {
  for (const auto* m : {&v.up, &v.front, &v.right}) {
    if (m->rotation < 0 || m->rotation > 3) return false;
    if (std::none_of(alphabet().begin(), alphabet().end(), [&](const auto& e) { return e.first == m->symbol; })) return false;
  }
  return v.up.symbol != v.front.symbol && v.up.symbol != v.right.symbol && v.front.symbol != v.right.symbol;
}

namespace {

using Mat3 = std::array<Vec3, 3>;  // rows

Vec3 mul(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return r;
}

Vec3 mul_t(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = m[0][i] * v[0] + m[1][i] * v[1] + m[2][i] * v[2];
  return r;
}

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return r;
}

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 neg(const Vec3& v) { return {-v[0], -v[1], -v[2]}; }

// Rotation group of the cube, closed under quarter turns about x and y.
const std::vector<Mat3>& orientations() {
  static const std::vector<Mat3> all = [] {
    const Mat3 id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const Mat3 rx{{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}};
    const Mat3 ry{{{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}};
    std::vector<Mat3> out{id};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : {rx, ry}) {
        Mat3 m = mul(g, out[i]);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
      }
    return out;
  }();
  return all;
}

// World directions of the visible faces and the on-screen "up" of each.
constexpr Vec3 kUpFace{0, 1, 0}, kFrontFace{0, 0, 1}, kRightFace{1, 0, 0};

Vec3 canonical_up(const Vec3& face) {
  if (face == kUpFace) return {0, 0, -1};
  return {0, 1, 0};
}

// Quarter turn clockwise as seen from outside the face with normal w.
Vec3 turn_cw(const Vec3& v, const Vec3& w) { return cross3(v, w); }

Vec3 mark_up(const Vec3& face, int k) {
  Vec3 u = canonical_up(face);
  for (int i = 0; i < k; ++i) u = turn_cw(u, face);
  return u;
}

int rotation_of(const Vec3& face, const Vec3& up) {
  for (int k = 0; k < 4; ++k)
    if (mark_up(face, k) == up) return k;
  throw Error("symbol direction is not in the face plane");
}

bool ups_compatible(const std::string& symbol, const Vec3& a, const Vec3& b) {
  switch (symmetry_of(symbol)) {
    case Symmetry::fourfold: return true;
    case Symmetry::twofold: return a == b || a == neg(b);
    default: return a == b;
  }
}

struct Seen {
  Vec3 face;
  const FaceMark* mark;
};

std::array<Seen, 3> seen(const CubeView& v) { return {{{kUpFace, &v.up}, {kFrontFace, &v.front}, {kRightFace, &v.right}}}; }

}  // namespace

int orientation_count() { return static_cast<int>(orientations().size()); }

bool cube_same(const CubeView& v1, const CubeView& v2) {
  if (!view_valid(v1) || !view_valid(v2)) throw InvalidArgument("cube views need three distinct known symbols");
  // v1 fixes the cube frame: its visible faces are +y, +z, +x.
  const auto known = seen(v1);
  for (const auto& g : orientations()) {
    bool ok = true;
    for (const auto& [w, mark] : seen(v2)) {
      const Vec3 body = mul_t(g, w);
      const Vec3 up = mul_t(g, mark_up(w, mark->rotation));
      const auto hit = std::find_if(known.begin(), known.end(), [&](const Seen& s) { return s.face == body; });
      if (hit != known.end()) {
        ok = hit->mark->symbol == mark->symbol && ups_compatible(mark->symbol, mark_up(hit->face, hit->mark->rotation), up);
      } else {
        ok = std::none_of(known.begin(), known.end(), [&](const Seen& s) { return s.mark->symbol == mark->symbol; });
      }
      if (!ok) break;
    }
    if (ok) return true;
  }
  return false;
}

CubeView view_of(const Labeling& cube, int orientation) {
  const Mat3& g = orientations().at(static_cast<std::size_t>(orientation));
  auto mark = [&](const Vec3& w) {
    const Vec3 body = mul_t(g, w);
    for (std::size_t i = 0; i < 6; ++i)
      if (cube.normal[i] == body) return FaceMark{cube.symbol[i], rotation_of(w, mul(g, cube.up[i]))};
    throw Error("labeling is missing a face");
  };
  return {mark(kUpFace), mark(kFrontFace), mark(kRightFace)};
}

namespace {

Labeling random_labeling(SeededRng& rng) {
  Labeling cube;
  const auto picks = rng.sample_indices(alphabet().size(), 6);
  const std::array<Vec3, 6> normals{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (std::size_t i = 0; i < 6; ++i) {
    cube.normal[i] = normals[i];
    cube.symbol[i] = alphabet()[picks[i]].first;
    std::vector<Vec3> ups;
    for (const auto& d : normals)
      if (d[0] * normals[i][0] + d[1] * normals[i][1] + d[2] * normals[i][2] == 0) ups.push_back(d);
    cube.up[i] = rng.pick(ups);
  }
  return cube;
}

// Near miss: one face turned, two faces swapped, or a symbol replaced by one
// the first view shows elsewhere.
CubeView perturb(CubeView v, const CubeView& first, SeededRng& rng) {
  std::array<FaceMark*, 3> faces{&v.up, &v.front, &v.right};
  switch (rng.below(3)) {
    case 0: {
      FaceMark* f = faces[rng.below(3)];
      f->rotation = (f->rotation + static_cast<int>(rng.uniform_int(1, 3))) % 4;
      break;
    }
    case 1: {
      const auto ij = rng.sample_indices(3, 2);
      std::swap(faces[ij[0]]->symbol, faces[ij[1]]->symbol);
      break;
    }
    default: {
      const std::array<std::string, 3> pool{first.up.symbol, first.front.symbol, first.right.symbol};
      faces[rng.below(3)]->symbol = pool[rng.below(3)];
    }
  }
  return v;
}

}  // namespace

S2Item gen_s2_item(bool want_same, SeededRng& rng) {
  const int n = orientation_count();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Labeling cube = random_labeling(rng);
    const int g1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int g2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (g2 >= g1) ++g2;
    S2Item item{view_of(cube, g1), view_of(cube, g2), false};
    if (!want_same) {
      item.second = perturb(item.second, item.first, rng);
      if (!view_valid(item.second)) continue;
    }
    item.truth = cube_same(item.first, item.second);
    if (item.truth == want_same) return item;
  }
  throw GenerationFailed("S2 resample cap reached", rng.seed());
}

namespace {

Image glyph(const std::string& symbol) {
  Scene sc(100, 100);
  if (symbol == "+") {
    sc.line({50, 18}, {50, 82}, 11);
    sc.line({18, 50}, {82, 50}, 11);
  } else if (symbol == "O") {
    sc.add(CircleShape{{50, 50}, 30, 10, 0, std::nullopt});
  } else {
    sc.add(TextShape{symbol, {50, 50}, 64, 9, 0});
  }
  return render(sc, 200, 200);
}

void face(Scene& sc, Point origin, Point u, Point v, const FaceMark& m) {
  sc.add(PolygonShape{{origin, origin + u, origin + u + v, origin + v}, std::uint8_t{255}, 2 * kStroke, 0});
  const Image tile = glyph(m.symbol).rotated(m.rotation);
  sc.add(TileShape{tile, origin + 0.15 * u + 0.15 * v, 0.7 * u, 0.7 * v, TileBlend::darken}, 1);
}

}  // namespace

Scene cube_scene(const CubeView& v) {
  Scene sc;
  const double a = 240, d = 120, x0 = 120, y0 = 240;
  face(sc, {x0, y0}, {a, 0}, {0, a}, v.front);
  face(sc, {x0 + a, y0}, {d, -d}, {0, a}, v.right);
  face(sc, {x0 + d, y0 - d}, {a, 0}, {-d, d}, v.up);
  return sc;
}

nlohmann::json to_json(const CubeView& v) {
  auto mark = [](const FaceMark& m) { return nlohmann::json{{"symbol", m.symbol}, {"rotation", m.rotation}}; };
  return {{"up", mark(v.up)}, {"front", mark(v.front)}, {"right", mark(v.right)}};
}

CubeView cube_view_from_json(const nlohmann::json& j) {
  auto mark = [](const nlohmann::json& m) { return FaceMark{m.at("symbol").get<std::string>(), m.at("rotation").get<int>()}; };
  return {mark(j.at("up")), mark(j.at("front")), mark(j.at("right"))};
}

}  // namespace visfactor::spatial
