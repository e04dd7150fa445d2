#include "visfactor/closure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "visfactor/error.hpp"

namespace visfactor::closure {
namespace {

constexpr int kMaxAttempts = 1000;
constexpr double kMargin = 60;

void check_params(int rows, int cols, double rho, double rho_std, bool allow_zero) {
  if (rows < 2 || cols < 2) throw InvalidArgument("lattice dimensions must be at least 2x2");
  if (!(rho <= 1.0) || (allow_zero ? rho < 0.0 : rho <= 0.0)) throw InvalidArgument("density must lie in (0, 1]");
  if (!(rho_std >= 0.0)) throw InvalidArgument("density spread must be non-negative");
}

std::size_t target_count(double rho, double rho_std, std::size_t lo, std::size_t hi, SeededRng& rng) {
  const double e = static_cast<double>(hi);
  const double k = std::round(rng.normal(rho * e, rho_std * e));
  return static_cast<std::size_t>(std::clamp(k, static_cast<double>(lo), e));
}

std::uint64_t key(const LatticeEdge& e) {
  auto u = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint16_t>(v)); };
  return (u(e.a.row) << 48) | (u(e.a.col) << 32) | (u(e.b.row) << 16) | u(e.b.col);
}

void add_extra(EdgeList& edges, const std::vector<LatticeEdge>& all, std::size_t k, SeededRng& rng) {
  if (k <= edges.size()) return;
  std::vector<LatticeEdge> rest;
  std::set_difference(all.begin(), all.end(), edges.begin(), edges.end(), std::back_inserter(rest));
  for (std::size_t i : rng.sample_indices(rest.size(), k - edges.size())) edges.push_back(rest[i]);
  std::sort(edges.begin(), edges.end());
}

geom::Point at(GridPoint p) { return {static_cast<double>(p.col), static_cast<double>(p.row)}; }

long long cross(GridPoint o, GridPoint a, GridPoint b) {
  return static_cast<long long>(a.col - o.col) * (b.row - o.row) - static_cast<long long>(a.row - o.row) * (b.col - o.col);
}

// p on the closed segment a-b.
bool on_segment(GridPoint p, GridPoint a, GridPoint b) {
  return cross(a, b, p) == 0 && std::min(a.row, b.row) <= p.row && p.row <= std::max(a.row, b.row) &&
         std::min(a.col, b.col) <= p.col && p.col <= std::max(a.col, b.col);
}

bool segment_ok(const WalkPath& walk, GridPoint cur, GridPoint next, std::size_t upto) {
  const geom::Segment s{at(cur), at(next)};
  for (std::size_t i = 0; i + 1 < upto; ++i) {
    const GridPoint a = walk.visited[i], b = walk.visited[i + 1];
    if (geom::collinear_overlap({at(a), at(b)}, s)) return false;
    if (on_segment(next, a, b)) return false;
  }
  for (std::size_t i = 0; i < upto; ++i) {
    const GridPoint v = walk.visited[i];
    if (v == cur) continue;
    if (on_segment(v, cur, next)) return false;
  }
  return true;
}

}  // namespace

bool PatternGraph::has(const LatticeEdge& e) const { return std::binary_search(edges.begin(), edges.end(), e); }

PatternGraph gen_cf2(int rows, int cols, double rho, double rho_std, SeededRng& rng) {
  check_params(rows, cols, rho, rho_std, false);
  const geom::Lattice lat(rows, cols);
  const std::size_t n = lat.node_count();

  std::vector<std::vector<GridPoint>> adj(n);
  for (const auto& e : lat.admissible()) {
    adj[lat.index(e.a)].push_back(e.b);
    adj[lat.index(e.b)].push_back(e.a);
  }

  PatternGraph g{rows, cols, {}};
  std::vector<bool> seen(n, false);
  struct Frame {
    GridPoint node;
    std::vector<GridPoint> next;
    std::size_t i = 0;
  };
  const GridPoint root{static_cast<int>(rng.below(rows)), static_cast<int>(rng.below(cols))};
  std::vector<Frame> stack;
  auto push = [&](GridPoint p) {
    seen[lat.index(p)] = true;
    Frame f{p, adj[lat.index(p)]};
    rng.shuffle(f.next);
    stack.push_back(std::move(f));
  };
  push(root);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.i == f.next.size()) {
      stack.pop_back();
      continue;
    }
    const GridPoint q = f.next[f.i++];
    if (seen[lat.index(q)]) continue;
    g.edges.emplace_back(f.node, q);
    push(q);
  }
  std::sort(g.edges.begin(), g.edges.end());

  add_extra(g.edges, lat.admissible(), target_count(rho, rho_std, n - 1, lat.admissible().size(), rng), rng);
  return g;
}

PatternGraph gen_cf1(int rows, int cols, double rho, double rho_std, SeededRng& rng) {
  check_params(rows, cols, rho, rho_std, true);
  const geom::Lattice lat(rows, cols);
  PatternGraph g{rows, cols, lat.perimeter()};
  add_extra(g.edges, lat.admissible(), target_count(rho, rho_std, 0, lat.admissible().size(), rng), rng);
  return g;
}

bool is_connected(const PatternGraph& g) {
  const std::size_t n = static_cast<std::size_t>(g.rows) * g.cols;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto idx = [&](GridPoint p) { return static_cast<std::size_t>(p.row) * g.cols + p.col; };
  std::size_t components = n;
  for (const auto& e : g.edges) {
    auto a = find(idx(e.a)), b = find(idx(e.b));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

EdgeList normalize(EdgeList edges) {
  if (edges.empty()) return edges;
  int r0 = edges.front().a.row, c0 = edges.front().a.col;
  for (const auto& e : edges) {
    r0 = std::min({r0, e.a.row, e.b.row});
    c0 = std::min({c0, e.a.col, e.b.col});
  }
  for (auto& e : edges) e = e.translated(-r0, -c0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

bool contains_model(const EdgeList& model, const PatternGraph& pattern) {
  if (model.empty()) throw InvalidArgument("model has no edges");
  std::unordered_set<std::uint64_t> present;
  std::set<GridPoint> pattern_nodes;
  for (const auto& e : pattern.edges) {
    present.insert(key(e));
    pattern_nodes.insert(e.a);
    pattern_nodes.insert(e.b);
  }
  std::set<GridPoint> model_nodes;
  for (const auto& e : model) {
    model_nodes.insert(e.a);
    model_nodes.insert(e.b);
  }
  std::set<std::pair<int, int>> tried;
  for (const auto& v : model_nodes) {
    for (const auto& p : pattern_nodes) {
      const int dr = p.row - v.row, dc = p.col - v.col;
      if (!tried.insert({dr, dc}).second) continue;
      bool all = true;
      for (const auto& e : model) {
        LatticeEdge t = e.translated(dr, dc);
        if (t.a.row < 0 || t.a.col < 0 || t.b.row < 0 || t.b.col < 0 || !present.count(key(t))) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
  }
  return false;
}

EdgeList extract_model(const PatternGraph& pattern, int min_edges, int max_edges, SeededRng& rng) {
  if (pattern.edges.empty() || min_edges < 1 || max_edges < min_edges)
    throw InvalidArgument("invalid model size request");
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const auto target = static_cast<std::size_t>(rng.uniform_int(min_edges, max_edges));
    std::vector<LatticeEdge> chosen{rng.pick(pattern.edges)};
    std::set<LatticeEdge> taken{chosen.front()};
    while (chosen.size() < target) {
      std::vector<LatticeEdge> frontier;
      for (const auto& e : pattern.edges) {
        if (taken.count(e)) continue;
        for (const auto& c : chosen) {
          if (e.a == c.a || e.a == c.b || e.b == c.a || e.b == c.b) {
            frontier.push_back(e);
            break;
          }
        }
      }
      if (frontier.empty()) break;
      const auto& e = rng.pick(frontier);
      chosen.push_back(e);
      taken.insert(e);
    }
    if (chosen.size() >= static_cast<std::size_t>(min_edges)) return normalize(std::move(chosen));
  }
  throw GenerationFailed("no connected model of the requested size", rng.seed());
}

void plant_model(PatternGraph& pattern, const EdgeList& model, SeededRng& rng) {
  const EdgeList m = normalize(model);
  int h = 0, w = 0;
  for (const auto& e : m) {
    h = std::max({h, e.a.row, e.b.row});
    w = std::max({w, e.a.col, e.b.col});
  }
  if (h >= pattern.rows || w >= pattern.cols) throw InvalidArgument("model does not fit in the pattern lattice");
  const int dr = static_cast<int>(rng.below(pattern.rows - h));
  const int dc = static_cast<int>(rng.below(pattern.cols - w));
  for (const auto& e : m) pattern.edges.push_back(e.translated(dr, dc));
  std::sort(pattern.edges.begin(), pattern.edges.end());
  pattern.edges.erase(std::unique(pattern.edges.begin(), pattern.edges.end()), pattern.edges.end());
}

std::vector<geom::Segment> WalkPath::segments() const {
  std::vector<geom::Segment> out;
  for (std::size_t i = 0; i + 1 < visited.size(); ++i) out.push_back({at(visited[i]), at(visited[i + 1])});
  return out;
}

std::vector<GridPoint> walk_candidates(int rows, int cols, const WalkPath& walk) {
  std::vector<GridPoint> out;
  const GridPoint cur = walk.end();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const GridPoint p{r, c};
      if (std::find(walk.visited.begin(), walk.visited.end(), p) != walk.visited.end()) continue;
      if (segment_ok(walk, cur, p, walk.visited.size())) out.push_back(p);
    }
  }
  return out;
}

std::optional<WalkPath> grow_walk(int rows, int cols, GridPoint start, int steps, SeededRng& rng) {
  WalkPath walk{start, {start}};
  for (int i = 0; i < steps; ++i) {
    auto cand = walk_candidates(rows, cols, walk);
    if (cand.empty()) return std::nullopt;
    walk.visited.push_back(rng.pick(cand));
  }
  return walk;
}

Cf3Item gen_cf3(int rows, int cols, int min_steps, int max_steps, SeededRng& rng) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw InvalidArgument("copying lattice needs at least two dots");
  if (min_steps < 1 || max_steps < min_steps) throw InvalidArgument("invalid step range");
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const int steps = static_cast<int>(rng.uniform_int(min_steps, max_steps));
    const GridPoint start{static_cast<int>(rng.below(rows)), static_cast<int>(rng.below(cols))};
    if (auto walk = grow_walk(rows, cols, start, steps, rng)) {
      const GridPoint end = walk->end();
      return {rows, cols, std::move(*walk), {end.row + 1, end.col + 1}};
    }
  }
  throw GenerationFailed("copying walk exhausted its restarts", rng.seed());
}

GridPoint replay_answer(const GridPoint& start, const std::vector<GridPoint>& moves) {
  GridPoint p = start;
  for (const auto& d : moves) {
    p.row += d.row;
    p.col += d.col;
  }
  return {p.row + 1, p.col + 1};
}

bool walk_valid(int rows, int cols, const WalkPath& walk) {
  if (walk.visited.empty() || walk.visited.front() != walk.start) return false;
  std::set<GridPoint> seen;
  for (const auto& p : walk.visited) {
    if (p.row < 0 || p.row >= rows || p.col < 0 || p.col >= cols) return false;
    if (!seen.insert(p).second) return false;
  }
  for (std::size_t i = 1; i < walk.visited.size(); ++i) {
    if (!segment_ok(walk, walk.visited[i - 1], walk.visited[i], i)) return false;
  }
  return true;
}

Cf1Question gen_cf1_question(int rows, int cols, double rho, double rho_std, SeededRng& rng) {
  Cf1Question q;
  q.pattern = gen_cf1(rows, cols, rho, rho_std, rng);
  q.correct = static_cast<int>(rng.below(5));
  for (int i = 0; i < 5; ++i) {
    if (i == q.correct) {
      q.models.push_back(extract_model(q.pattern, 3, 6, rng));
      continue;
    }
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) throw GenerationFailed("no absent hidden-figure shape found", rng.seed());
      const PatternGraph fresh = gen_cf1(rows, cols, rho, rho_std, rng);
      EdgeList m = extract_model(fresh, 3, 6, rng);
      if (contains_model(m, q.pattern)) continue;
      if (std::find(q.models.begin(), q.models.end(), m) != q.models.end()) continue;
      q.models.push_back(std::move(m));
      break;
    }
  }
  return q;
}

Cf2Question gen_cf2_question(int rows, int cols, double rho, double rho_std, SeededRng& rng) {
  Cf2Question q;
  q.model = extract_model(gen_cf2(rows, cols, rho, rho_std, rng), 3, 6, rng);
  for (int i = 0; i < 5; ++i) {
    const bool planted = rng.bernoulli(0.5);
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) throw GenerationFailed("no pattern without the model found", rng.seed());
      PatternGraph p = gen_cf2(rows, cols, rho, rho_std, rng);
      if (planted) plant_model(p, q.model, rng);
      if (contains_model(q.model, p) != planted) continue;
      q.patterns.push_back(std::move(p));
      q.truths.push_back(planted);
      break;
    }
  }
  return q;
}

double pattern_unit(int rows, int cols) { return 480.0 / (std::max(rows, cols) - 1); }

Scene pattern_scene(const PatternGraph& g, double unit) {
  Scene s((g.cols - 1) * unit + 2 * kMargin, (g.rows - 1) * unit + 2 * kMargin);
  for (const auto& e : g.edges)
    s.line({kMargin + e.a.col * unit, kMargin + e.a.row * unit}, {kMargin + e.b.col * unit, kMargin + e.b.row * unit},
           2 * kStroke);
  return s;
}

Scene model_scene(const EdgeList& model, double unit) {
  const EdgeList m = normalize(model);
  int h = 0, w = 0;
  for (const auto& e : m) {
    h = std::max({h, e.a.row, e.b.row});
    w = std::max({w, e.a.col, e.b.col});
  }
  PatternGraph g{h + 1, w + 1, m};
  return pattern_scene(g, unit);
}

namespace {

geom::Point dot_at(const Cf3Item& item, GridPoint p) {
  const double unit = 480.0 / std::max(1, std::max(item.rows, item.cols) - 1);
  return {kMargin + p.col * unit, kMargin + p.row * unit};
}

}  // namespace

Scene cf3_shape_scene(const Cf3Item& item) {
  Scene s;
  std::vector<geom::Point> pts;
  for (const auto& p : item.walk.visited) pts.push_back(dot_at(item, p));
  s.add(LineShape{pts, 2 * kStroke});
  s.add(CircleShape{dot_at(item, item.walk.start), 9, 0, 0, std::uint8_t{0}});
  return s;
}

Scene cf3_grid_scene(const Cf3Item& item) {
  Scene s;
  for (int r = 0; r < item.rows; ++r)
    for (int c = 0; c < item.cols; ++c) s.add(CircleShape{dot_at(item, {r, c}), 7, 0, 0, std::uint8_t{0}});
  s.add(CircleShape{dot_at(item, item.walk.start), 22, kStroke, 0, std::nullopt});
  return s;
}

nlohmann::json edges_to_json(const EdgeList& edges) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : edges) a.push_back({e.a.row, e.a.col, e.b.row, e.b.col});
  return a;
}

EdgeList edges_from_json(const nlohmann::json& j) {
  EdgeList out;
  for (const auto& e : j)
    out.emplace_back(GridPoint{e.at(0).get<int>(), e.at(1).get<int>()}, GridPoint{e.at(2).get<int>(), e.at(3).get<int>()});
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json to_json(const PatternGraph& g) {
  return {{"rows", g.rows}, {"cols", g.cols}, {"edges", edges_to_json(g.edges)}};
}

PatternGraph pattern_from_json(const nlohmann::json& j) {
  return {j.at("rows").get<int>(), j.at("cols").get<int>(), edges_from_json(j.at("edges"))};
}

}  // namespace visfactor::closure
