#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance checks. None of them call the code they are used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "visfactor/closure.hpp"
#include "visfactor/folding.hpp"
#include "visfactor/formboard.hpp"
#include "visfactor/mapplan.hpp"
#include "visfactor/spatial.hpp"

namespace visfactor::oracle {

// ---- cubes, by explicit rotation matrices ----

using M3 = std::array<std::array<double, 3>, 3>;
using V3 = std::array<double, 3>;

inline V3 times(const M3& m, const V3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2], m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}
inline M3 transpose(const M3& m) {
  M3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}
inline double det(const M3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}
inline bool same(const V3& a, const V3& b) {
  return std::abs(a[0] - b[0]) < 1e-9 && std::abs(a[1] - b[1]) < 1e-9 && std::abs(a[2] - b[2]) < 1e-9;
}

// Every signed permutation matrix with determinant +1.
inline std::vector<M3> rotations() {
  std::vector<M3> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      M3 m{};
      for (int i = 0; i < 3; ++i) m[i][perm[i]] = (signs >> i & 1) ? -1 : 1;
      if (det(m) > 0) out.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Rodrigues rotation of v about unit axis n by angle a.
inline V3 rotate(const V3& v, const V3& n, double a) {
  const double c = std::cos(a), s = std::sin(a), d = n[0] * v[0] + n[1] * v[1] + n[2] * v[2];
  const V3 x{n[1] * v[2] - n[2] * v[1], n[2] * v[0] - n[0] * v[2], n[0] * v[1] - n[1] * v[0]};
  V3 r{};
  for (int i = 0; i < 3; ++i) r[i] = std::round(v[i] * c + x[i] * s + n[i] * d * (1 - c));
  return r;
}

inline const V3 kUp{0, 1, 0}, kFront{0, 0, 1}, kRight{1, 0, 0};

// Screen "up" of each visible face, turned clockwise seen from outside.
inline V3 drawn_up(const V3& face, int k) {
  V3 u = same(face, kUp) ? V3{0, 0, -1} : V3{0, 1, 0};
  return rotate(u, face, -k * M_PI / 2);
}

struct OFace {
  std::string symbol;
  V3 up;
};

inline int fold(const std::string& s) {
  if (s == "+" || s == "O") return 4;
  if (std::string("NSZHIX").find(s) != std::string::npos) return 2;
  return 1;
}

inline bool matches(const OFace& f, const V3& world_face, const M3& r, const spatial::FaceMark& m) {
  if (f.symbol != m.symbol) return false;
  const V3 up = times(r, f.up);
  for (int k = 0; k < 4; ++k)
    if (same(drawn_up(world_face, k), up)) return ((k - m.rotation) % 4 + 4) % 4 % (4 / fold(m.symbol)) == 0;
  return false;
}

// Exhaustive: a cube whose +y/+z/+x faces are exactly v1, any hidden faces
// (symbols distinct from everything else, any direction), any rotation.
inline bool cube_same(const spatial::CubeView& v1, const spatial::CubeView& v2) {
  std::map<std::string, OFace> faces;  // keyed by normal
  auto key = [](const V3& n) { return std::to_string(static_cast<int>(n[0])) + std::to_string(static_cast<int>(n[1])) + std::to_string(static_cast<int>(n[2])); };
  faces[key(kUp)] = {v1.up.symbol, drawn_up(kUp, v1.up.rotation)};
  faces[key(kFront)] = {v1.front.symbol, drawn_up(kFront, v1.front.rotation)};
  faces[key(kRight)] = {v1.right.symbol, drawn_up(kRight, v1.right.rotation)};
  std::vector<std::string> pool{v2.up.symbol, v2.front.symbol, v2.right.symbol, "#a", "#b", "#c"};
  std::erase_if(pool, [&](const std::string& s) { return s == v1.up.symbol || s == v1.front.symbol || s == v1.right.symbol; });
  const std::array<std::pair<V3, const spatial::FaceMark*>, 3> seen{{{kUp, &v2.up}, {kFront, &v2.front}, {kRight, &v2.right}}};
  for (const auto& r : rotations()) {
    // Hidden faces this rotation brings into view.
    std::vector<std::pair<V3, const spatial::FaceMark*>> hidden;
    bool ok = true;
    for (const auto& [w, m] : seen) {
      const V3 n = times(transpose(r), w);
      auto it = faces.find(key(n));
      if (it == faces.end()) hidden.push_back({n, m});
      else ok = ok && matches(it->second, w, r, *m);
    }
    if (!ok) continue;
    if (hidden.empty()) return true;
    ok = false;
    // Enumerate symbol and direction for each hidden face in view.
    const std::size_t h = hidden.size();
    std::vector<V3> dirs{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::size_t combos = 1;
    for (std::size_t i = 0; i < h; ++i) combos *= pool.size() * dirs.size();
    for (std::size_t c = 0; c < combos && !ok; ++c) {
      std::size_t x = c;
      std::vector<OFace> assign;
      bool valid = true;
      for (std::size_t i = 0; i < h; ++i) {
        OFace f{pool[x % pool.size()], dirs[(x / pool.size()) % dirs.size()]};
        x /= pool.size() * dirs.size();
        const V3& n = hidden[i].first;
        if (std::abs(f.up[0] * n[0] + f.up[1] * n[1] + f.up[2] * n[2]) > 0.5) valid = false;
        for (const auto& g : assign) valid = valid && g.symbol != f.symbol;
        assign.push_back(f);
      }
      if (!valid) continue;
      bool all = true;
      for (std::size_t i = 0; i < h; ++i) {
        const V3 w = times(r, hidden[i].first);
        all = all && matches(assign[i], w, r, *hidden[i].second);
      }
      ok = all;
    }
    if (ok) return true;
  }
  return false;
}

inline spatial::CubeView random_view(SeededRng& rng, int pool_size) {
  const auto& abc = spatial::alphabet();
  std::vector<std::string> pool;
  for (auto i : rng.sample_indices(abc.size(), static_cast<std::size_t>(pool_size))) pool.push_back(abc[i].first);
  spatial::CubeView v;
  do {
    v = {{rng.pick(pool), static_cast<int>(rng.below(4))},
         {rng.pick(pool), static_cast<int>(rng.below(4))},
         {rng.pick(pool), static_cast<int>(rng.below(4))}};
  } while (!spatial::view_valid(v));
  return v;
}

// ---- shortest paths, by DFS over simple paths ----

inline std::pair<int, std::vector<std::vector<int>>> dfs_shortest(const mapplan::Graph& g, int s, int t) {
  int best = 1 << 30;
  std::vector<std::vector<int>> paths;
  std::vector<int> path{s};
  std::vector<bool> on(static_cast<std::size_t>(g.size()), false);
  on[static_cast<std::size_t>(s)] = true;
  std::function<void(int)> go = [&](int u) {
    const int len = static_cast<int>(path.size()) - 1;
    if (len > best) return;
    if (u == t) {
      if (len < best) {
        best = len;
        paths.clear();
      }
      paths.push_back(path);
      return;
    }
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      if (on[static_cast<std::size_t>(v)]) continue;
      on[static_cast<std::size_t>(v)] = true;
      path.push_back(v);
      go(v);
      path.pop_back();
      on[static_cast<std::size_t>(v)] = false;
    }
  };
  go(s);
  return {best, paths};
}

// Random street map on a rows x cols grid with up to half the streets removed.
inline mapplan::MapInstance random_map(SeededRng& rng, int rows, int cols) {
  mapplan::MapInstance m;
  m.rows = rows;
  m.cols = cols;
  const auto all = m.streets();
  for (auto i : rng.sample_indices(all.size(), rng.below(all.size() / 2))) m.removed.push_back(all[i]);
  return m;
}

// ---- pattern containment, by adjacency matrix and translation scan ----

inline bool contains(const closure::EdgeList& model, const closure::PatternGraph& p) {
  const int n = p.rows * p.cols;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : p.edges) {
    adj[e.a.row * p.cols + e.a.col][e.b.row * p.cols + e.b.col] = true;
    adj[e.b.row * p.cols + e.b.col][e.a.row * p.cols + e.a.col] = true;
  }
  for (int dr = -p.rows; dr <= p.rows; ++dr) {
    for (int dc = -p.cols; dc <= p.cols; ++dc) {
      bool ok = true;
      for (const auto& e : model) {
        const int r1 = e.a.row + dr, c1 = e.a.col + dc, r2 = e.b.row + dr, c2 = e.b.col + dc;
        if (r1 < 0 || r2 < 0 || c1 < 0 || c2 < 0 || r1 >= p.rows || r2 >= p.rows || c1 >= p.cols || c2 >= p.cols ||
            !adj[r1 * p.cols + c1][r2 * p.cols + c2]) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
  }
  return false;
}

inline closure::EdgeList random_model(SeededRng& rng, int extent) {
  closure::EdgeList m;
  const int count = static_cast<int>(rng.uniform_int(1, 5));
  const auto all = geom::admissible_edges(extent, extent);
  for (int i = 0; i < count; ++i) m.push_back(rng.pick(all));
  return closure::normalize(m);
}

// ---- folding, by recursive preimages ----

inline bool in_unit_square(const RPoint& p) { return p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1; }

// A flat point q reaches p after fold k when it sat on the stationary side and
// equals p, or sat on the moving side and reflects onto p. Recursing back to
// the flat sheet enumerates every layer under p.
inline void preimages(const folding::FoldState& s, std::size_t k, const RPoint& p, std::vector<RPoint>& out) {
  if (k == 0) {
    if (in_unit_square(p)) out.push_back(p);
    return;
  }
  const auto& rec = s.history[k - 1];
  const int side = exact::sign(geom::axis_side(p, rec.axis));
  if (side != rec.stationary) return;  // vacated half
  preimages(s, k - 1, p, out);
  preimages(s, k - 1, geom::reflect_across(p, rec.axis), out);
}

inline std::vector<RPoint> holes(const folding::FoldState& s, const std::vector<RPoint>& punches) {
  std::vector<RPoint> out;
  for (const auto& p : punches) preimages(s, s.history.size(), p, out);
  std::sort(out.begin(), out.end());
  return out;
}

// Layers strictly containing p, by exact cross products on each layer.
inline int layer_count(const folding::FoldState& s, const RPoint& p) {
  int n = 0;
  for (const auto& layer : s.layers) {
    const auto& poly = layer.poly;
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& a = poly[i];
      const auto& b = poly[(i + 1) % poly.size()];
      const Rational c = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      const int sg = exact::sign(c);
      if (sg > 0) ++pos;
      if (sg < 0) ++neg;
    }
    n += (pos == 0 || neg == 0) && pos + neg == static_cast<int>(poly.size());
  }
  return n;
}

// ---- form board, by sampled cover and shoelace areas ----

// Floating point-in-convex-polygon, orientation agnostic.
inline bool covers(const RPolygon& poly, double x, double y) {
  int pos = 0, neg = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const double c = (to_double(b.x) - to_double(a.x)) * (y - to_double(a.y)) - (to_double(b.y) - to_double(a.y)) * (x - to_double(a.x));
    (c > 0 ? pos : neg)++;
  }
  return pos == 0 || neg == 0;
}

// Every 1/6-unit subcell of the board is sampled at an off-lattice point so no
// sample sits on a cut line. Returns the number of subcells not covered
// exactly once (inside the target) or covered at all (outside it).
inline int cover_defects(const std::vector<RPolygon>& placed, const RPolygon& target, int grid) {
  int bad = 0;
  for (int i = -6; i < 6 * (grid + 1); ++i) {
    for (int j = -6; j < 6 * (grid + 1); ++j) {
      const double x = (i + 0.5) / 6 + 0.0123457, y = (j + 0.5) / 6 + 0.0071111;
      int n = 0;
      for (const auto& p : placed) n += covers(p, x, y);
      bad += covers(target, x, y) ? n != 1 : n != 0;
    }
  }
  return bad;
}

// Unsigned shoelace area.
inline Rational area(const RPolygon& poly) {
  Rational twice(0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  if (exact::sign(twice) < 0) twice = -twice;
  return twice / Rational(2);
}

// Nonempty piece subsets whose areas add up to the target's.
inline std::vector<unsigned> area_subsets(const std::vector<RPolygon>& pieces, const RPolygon& target) {
  const Rational want = area(target);
  std::vector<unsigned> out;
  for (unsigned mask = 1; mask < (1u << pieces.size()); ++mask) {
    Rational sum(0);
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (mask >> i & 1) sum += area(pieces[i]);
    if (sum == want) out.push_back(mask);
  }
  return out;
}

}  // namespace visfactor::oracle
