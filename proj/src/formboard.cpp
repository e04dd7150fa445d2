#include "visfactor/formboard.hpp"

#include <algorithm>
#include <set>

#include "visfactor/error.hpp"

namespace visfactor::formboard {
namespace {

using exact::orient;
using exact::sign;

Rational area(const RPolygon& p) {
  const Rational a = exact::signed_area(p);
  return a < 0 ? -a : a;
}

RPolygon hull(std::vector<RPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};
  RPolygon h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && sign(orient(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && sign(orient(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

RPoint lexmin(const RPolygon& p) { return *std::min_element(p.begin(), p.end()); }

// Halves of a convex fragment cut by the line through `at` with direction `dir`.
std::pair<RPolygon, RPolygon> cut(const RPolygon& frag, const RPoint& at, const RPoint& dir) {
  const RPoint b = at + dir;
  return {exact::ccw(exact::clip_convex(frag, at, b, 1)), exact::ccw(exact::clip_convex(frag, at, b, -1))};
}

std::optional<std::pair<RPolygon, RPolygon>> random_cut(const RPolygon& frag, const Rational& min_area, SeededRng& rng) {
  Rational x0 = frag[0].x, x1 = frag[0].x, y0 = frag[0].y, y1 = frag[0].y;
  for (const auto& v : frag) {
    x0 = std::min(x0, v.x), x1 = std::max(x1, v.x), y0 = std::min(y0, v.y), y1 = std::max(y1, v.y);
  }
  const auto lo_x = boost::rational_cast<std::int64_t>(x0), hi_x = boost::rational_cast<std::int64_t>(x1) + 1;
  const auto lo_y = boost::rational_cast<std::int64_t>(y0), hi_y = boost::rational_cast<std::int64_t>(y1) + 1;
  const Rational total = area(frag);
  for (int attempt = 0; attempt < 300; ++attempt) {
    const RPoint at{Rational(rng.uniform_int(lo_x, hi_x)), Rational(rng.uniform_int(lo_y, hi_y))};
    auto halves = cut(frag, at, rng.pick(cut_directions()));
    if (halves.first.size() < 3 || halves.second.size() < 3) continue;
    const Rational a = area(halves.first), b = area(halves.second);
    // Keep cuts reasonably balanced: the smaller half has a quarter or more.
    if (a < min_area || b < min_area || a * 4 < total || b * 4 < total) continue;
    return halves;
  }
  return std::nullopt;
}

bool area_taken(const std::vector<RPolygon>& pieces, const Rational& a) {
  return std::any_of(pieces.begin(), pieces.end(), [&](const RPolygon& p) { return area(p) == a; });
}

}  // namespace

const std::vector<RPoint>& cut_directions() {
  static const std::vector<RPoint> dirs{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}, {Rational(1), Rational(1)},
                                        {Rational(1), Rational(-1)}, {Rational(1), Rational(2)}, {Rational(1), Rational(-2)},
                                        {Rational(1), Rational(3)}, {Rational(1), Rational(-3)}};
  return dirs;
}

RPolygon gen_target(int n, SeededRng& rng) {
  if (n < 2) throw InvalidArgument("form board grid must be at least 2");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<RPoint> pts;
    const int m = static_cast<int>(rng.uniform_int(4, 7));
    for (int i = 0; i < m; ++i) pts.push_back({Rational(rng.uniform_int(0, n)), Rational(rng.uniform_int(0, n))});
    RPolygon h = exact::simplify(hull(pts));
    if (h.size() >= 3 && area(h) * 3 >= Rational(n * n)) return h;
  }
  throw GenerationFailed("VZ1 target rejection cap reached", rng.seed());
}

std::vector<bool> Vz1Item::truths() const {
  std::vector<bool> t;
  for (const auto& p : pieces) t.push_back(p.in_solution);
  return t;
}

RPolygon rotate_quarter(const RPolygon& poly, int k) {
  k = ((k % 4) + 4) % 4;
  RPolygon out = poly;
  for (int i = 0; i < k; ++i)
    for (auto& v : out) v = {-v.y, v.x};
  return out;
}

RPolygon to_origin(const RPolygon& poly) {
  Rational x0 = poly.at(0).x, y0 = poly.at(0).y;
  for (const auto& v : poly) x0 = std::min(x0, v.x), y0 = std::min(y0, v.y);
  RPolygon out;
  for (const auto& v : poly) out.push_back({v.x - x0, v.y - y0});
  return out;
}

std::vector<unsigned> area_matching_subsets(const std::vector<RPolygon>& pieces, const RPolygon& target) {
  const Rational goal = area(target);
  std::vector<unsigned> out;
  for (unsigned mask = 1; mask < (1u << pieces.size()); ++mask) {
    Rational sum{0};
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (mask >> i & 1u) sum += area(pieces[i]);
    if (sum == goal) out.push_back(mask);
  }
  return out;
}

Vz1Item gen_vz1(const Vz1Params& p, SeededRng& rng) {
  if (p.min_solution < 1 || p.max_solution > 5 || p.min_solution > p.max_solution)
    throw InvalidArgument("solution size must lie within [1, 5]");
  for (int attempt = 0; attempt < 100; ++attempt) {
    const RPolygon target = exact::ccw(gen_target(p.grid, rng));
    const int k = static_cast<int>(rng.uniform_int(p.min_solution, p.max_solution));
    std::vector<RPolygon> frags{target};
    bool ok = true;
    while (ok && static_cast<int>(frags.size()) < k) {
      // Largest fragment first; ties go to the earlier one.
      std::size_t big = 0;
      for (std::size_t i = 1; i < frags.size(); ++i)
        if (area(frags[i]) > area(frags[big])) big = i;
      ok = false;
      for (int tries = 0; tries < 50 && !ok; ++tries) {
        auto halves = random_cut(frags[big], p.min_area, rng);
        if (!halves) break;
        std::vector<RPolygon> rest = frags;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(big));
        const Rational a = area(halves->first), b = area(halves->second);
        if (a == b || area_taken(rest, a) || area_taken(rest, b)) continue;
        rest.push_back(halves->first);
        rest.push_back(halves->second);
        frags = std::move(rest);
        ok = true;
      }
    }
    if (!ok) continue;
    std::vector<RPolygon> all = frags;
    // Distractors come from re-cutting a random solution fragment.
    for (int tries = 0; tries < 200 && all.size() < 5; ++tries) {
      const RPolygon& src = frags[static_cast<std::size_t>(rng.below(frags.size()))];
      auto halves = random_cut(src, p.min_area, rng);
      if (!halves) continue;
      const RPolygon& d = rng.bernoulli(0.5) ? halves->first : halves->second;
      if (area_taken(all, area(d))) continue;
      all.push_back(d);
      if (all.size() == 5 && area_matching_subsets(all, target).size() != 1) all.pop_back();
    }
    if (all.size() < 5) continue;

    Vz1Item item;
    item.grid = p.grid;
    item.target = target;
    std::vector<std::size_t> order{0, 1, 2, 3, 4};
    rng.shuffle(order);
    for (std::size_t slot = 0; slot < 5; ++slot) {
      const std::size_t src = order[slot];
      Piece piece;
      piece.original = all[src];
      piece.rotation = static_cast<int>(rng.below(4));
      piece.shape = to_origin(rotate_quarter(all[src], piece.rotation));
      piece.in_solution = src < frags.size();
      if (piece.in_solution) item.solution.push_back(static_cast<int>(slot));
      item.pieces.push_back(std::move(piece));
    }
    return item;
  }
  throw GenerationFailed("VZ1 dissection rejection cap reached", rng.seed());
}

bool interiors_overlap(const RPolygon& a, const RPolygon& b) {
  // Separating axis test over every edge normal of both convex polygons.
  for (const RPolygon* poly : {&a, &b}) {
    for (std::size_t i = 0; i < poly->size(); ++i) {
      const RPoint e = (*poly)[(i + 1) % poly->size()] - (*poly)[i];
      const RPoint n{-e.y, e.x};
      auto range = [&](const RPolygon& q) {
        Rational lo = exact::dot(q[0], n), hi = lo;
        for (const auto& v : q) lo = std::min(lo, exact::dot(v, n)), hi = std::max(hi, exact::dot(v, n));
        return std::make_pair(lo, hi);
      };
      const auto [alo, ahi] = range(a);
      const auto [blo, bhi] = range(b);
      if (ahi <= blo || bhi <= alo) return false;
    }
  }
  return true;
}

namespace {

struct Search {
  const RPolygon& target;
  std::vector<std::vector<RPolygon>> rotations;  // per piece, distinct quarter turns
  std::vector<std::vector<int>> turn_of;
  std::vector<Placement> placed;
  std::vector<bool> used;

  std::vector<RPoint> anchors() const {
    std::vector<RPolygon> polys{target};
    for (std::size_t i = 0; i < placed.size(); ++i) polys.push_back(placed[i].placed);
    std::set<RPoint> pts;
    std::vector<RSegment> edges;
    for (const auto& p : polys)
      for (std::size_t i = 0; i < p.size(); ++i) {
        pts.insert(p[i]);
        edges.push_back({p[i], p[(i + 1) % p.size()]});
      }
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        if (!exact::segments_intersect(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) continue;
        if (auto x = exact::line_intersection(edges[i].a, edges[i].b, edges[j].a, edges[j].b)) pts.insert(*x);
      }
    return {pts.begin(), pts.end()};
  }

  bool fits(const RPolygon& cand) const {
    for (const auto& v : cand)
      if (exact::locate(v, target) == exact::Location::outside) return false;
    for (const auto& pl : placed)
      if (interiors_overlap(cand, pl.placed)) return false;
    return true;
  }

  // Pieces are placed in order of their lexicographically smallest vertex,
  // which in any tiling is the smallest point not yet covered; anchors are
  // therefore non-decreasing and the first one is the target's own minimum.
  bool run(const RPoint& floor, std::vector<Placement>& out) {
    if (placed.size() == rotations.size()) {
      out = placed;
      return true;
    }
    std::vector<RPoint> cands = anchors();
    if (placed.empty()) cands = {lexmin(target)};
    for (const auto& a : cands) {
      if (a < floor) continue;
      if (exact::locate(a, target) == exact::Location::outside) continue;
      bool buried = false;
      for (const auto& pl : placed) buried = buried || exact::locate(a, pl.placed) == exact::Location::inside;
      if (buried) continue;
      for (std::size_t i = 0; i < rotations.size(); ++i) {
        if (used[i]) continue;
        for (std::size_t r = 0; r < rotations[i].size(); ++r) {
          const RPolygon& shape = rotations[i][r];
          const RPoint shift = a - lexmin(shape);
          RPolygon cand;
          for (const auto& v : shape) cand.push_back(v + shift);
          if (!fits(cand)) continue;
          used[i] = true;
          placed.push_back({turn_of[i][r], shift, cand});
          if (run(a, out)) {
            // Report placements in the caller's piece order.
            return true;
          }
          placed.pop_back();
          used[i] = false;
        }
      }
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<Placement>> verify_tiling(const std::vector<RPolygon>& pieces, const RPolygon& target) {
  if (pieces.empty() || pieces.size() > 5) throw InvalidArgument("tiling check takes 1 to 5 pieces");
  Rational sum{0};
  for (const auto& p : pieces) sum += area(p);
  if (sum != area(target)) return std::nullopt;
  Search s{exact::ccw(target), {}, {}, {}, std::vector<bool>(pieces.size(), false)};
  for (const auto& p : pieces) {
    std::vector<RPolygon> rots;
    std::vector<int> turns;
    for (int k = 0; k < 4; ++k) {
      RPolygon r = exact::ccw(rotate_quarter(p, k));
      const RPoint m = lexmin(r);
      RPolygon norm;
      for (const auto& v : r) norm.push_back(v - m);
      std::sort(norm.begin(), norm.end());
      bool dup = false;
      for (const auto& prev : rots) {
        RPolygon q;
        const RPoint pm = lexmin(prev);
        for (const auto& v : prev) q.push_back(v - pm);
        std::sort(q.begin(), q.end());
        dup = dup || q == norm;
      }
      if (dup) continue;
      rots.push_back(r);
      turns.push_back(k);
    }
    s.rotations.push_back(rots);
    s.turn_of.push_back(turns);
  }
  std::vector<Placement> found;
  if (!s.run(lexmin(s.target), found)) return std::nullopt;
  return found;
}

namespace {

constexpr double kMargin = 60;

std::vector<geom::Point> to_screen(const RPolygon& p, double unit, geom::Point origin, double height) {
  std::vector<geom::Point> out;
  // Lattice y grows upward; screen y grows downward.
  for (const auto& v : p) out.push_back({origin.x + unit * to_double(v.x), origin.y + height - unit * to_double(v.y)});
  return out;
}

}  // namespace

Scene target_scene(const Vz1Item& item) {
  Scene sc;
  const double unit = (kCanvas - 2 * kMargin) / item.grid;
  sc.add(PolygonShape{to_screen(item.target, unit, {kMargin, kMargin}, item.grid * unit), std::nullopt, 2 * kStroke, 0});
  return sc;
}

Scene pieces_scene(const Vz1Item& item) {
  const double unit = (kCanvas - 2 * kMargin) / item.grid;
  const double cell = kCanvas / 2;
  Scene sc(5 * cell * 1.1, cell * 1.35);
  for (std::size_t i = 0; i < item.pieces.size(); ++i) {
    const auto& shape = item.pieces[i].shape;
    Rational w{0}, h{0};
    for (const auto& v : shape) w = std::max(w, v.x), h = std::max(h, v.y);
    const double s = std::min(unit, 0.8 * cell / std::max(to_double(w), to_double(h)));
    const double ox = i * cell * 1.1 + (cell * 1.1 - s * to_double(w)) / 2, oy = (cell - s * to_double(h)) / 2;
    sc.add(PolygonShape{to_screen(shape, s, {ox, oy}, s * to_double(h)), std::nullopt, 2 * kStroke, 0});
    sc.text(std::to_string(i + 1), {i * cell * 1.1 + cell * 0.55, cell * 1.18}, 40);
  }
  return sc;
}

nlohmann::json polygon_to_json(const RPolygon& p) {
  auto j = nlohmann::json::array();
  for (const auto& v : p) j.push_back({to_string(v.x), to_string(v.y)});
  return j;
}

RPolygon polygon_from_json(const nlohmann::json& j) {
  RPolygon p;
  for (const auto& v : j) p.push_back({parse_rational(v.at(0).get<std::string>()), parse_rational(v.at(1).get<std::string>())});
  return p;
}

nlohmann::json to_json(const Vz1Item& item) {
  nlohmann::json j{{"grid", item.grid}, {"target", polygon_to_json(item.target)}, {"solution", item.solution}};
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : item.pieces)
    j["pieces"].push_back({{"shape", polygon_to_json(p.shape)}, {"original", polygon_to_json(p.original)},
                           {"rotation", p.rotation}, {"in_solution", p.in_solution}});
  return j;
}

Vz1Item vz1_from_json(const nlohmann::json& j) {
  Vz1Item item;
  item.grid = j.at("grid");
  item.target = polygon_from_json(j.at("target"));
  item.solution = j.at("solution").get<std::vector<int>>();
  for (const auto& p : j.at("pieces"))
    item.pieces.push_back({polygon_from_json(p.at("shape")), polygon_from_json(p.at("original")), p.at("rotation"), p.at("in_solution")});
  return item;
}

}  // namespace visfactor::formboard
