#include "visfactor/mapplan.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "visfactor/error.hpp"

namespace visfactor::mapplan {

void Graph::connect(int a, int b) {
  adj[static_cast<std::size_t>(a)].push_back(b);
  adj[static_cast<std::size_t>(b)].push_back(a);
}

std::optional<PathCount> count_shortest_paths(const Graph& g, int s, int t) {
  const auto n = static_cast<std::size_t>(g.size());
  if (s < 0 || t < 0 || static_cast<std::size_t>(s) >= n || static_cast<std::size_t>(t) >= n)
    throw InvalidArgument("path endpoints outside the graph");
  std::vector<int> dist(n, -1);
  std::vector<BigInt> ways(n, 0);
  std::deque<int> queue{s};
  dist[static_cast<std::size_t>(s)] = 0;
  ways[static_cast<std::size_t>(s)] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      auto& dv = dist[static_cast<std::size_t>(v)];
      if (dv < 0) {
        dv = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
      if (dv == dist[static_cast<std::size_t>(u)] + 1) ways[static_cast<std::size_t>(v)] += ways[static_cast<std::size_t>(u)];
    }
  }
  if (dist[static_cast<std::size_t>(t)] < 0) return std::nullopt;
  PathCount out{dist[static_cast<std::size_t>(t)], ways[static_cast<std::size_t>(t)], {}};
  if (out.count == 1) {
    // Walk back through the unique predecessor at each layer.
    for (int v = t;;) {
      out.geodesic.push_back(v);
      if (v == s) break;
      for (int u : g.adj[static_cast<std::size_t>(v)])
        if (dist[static_cast<std::size_t>(u)] == dist[static_cast<std::size_t>(v)] - 1) {
          v = u;
          break;
        }
    }
    std::reverse(out.geodesic.begin(), out.geodesic.end());
  }
  return out;
}

namespace {

Street street(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

std::pair<Street, Street> Building::sides(int cols) const {
  const int r = row + (corner == Corner::sw || corner == Corner::se ? 1 : 0);
  const int c = col + (corner == Corner::ne || corner == Corner::se ? 1 : 0);
  const int node = r * cols + c;
  // Horizontal street along the cell edge through the corner, then vertical.
  const int across = (corner == Corner::nw || corner == Corner::sw) ? node + 1 : node - 1;
  const int down = (corner == Corner::nw || corner == Corner::ne) ? node + cols : node - cols;
  return {street(node, across), street(node, down)};
}

std::vector<Street> MapInstance::streets() const {
  std::set<Street> gone(removed.begin(), removed.end());
  std::vector<Street> out;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int u = r * cols + c;
      if (c + 1 < cols && !gone.count(street(u, u + 1))) out.push_back(street(u, u + 1));
      if (r + 1 < rows && !gone.count(street(u, u + cols))) out.push_back(street(u, u + cols));
    }
  return out;
}

Graph MapInstance::graph() const {
  Graph g(rows * cols);
  for (auto [a, b] : streets()) g.connect(a, b);
  return g;
}

std::vector<int> MapInstance::perimeter() const {
  std::vector<int> out;
  for (int c = 0; c < cols; ++c) out.push_back(c);
  for (int r = 1; r < rows; ++r) out.push_back(r * cols + cols - 1);
  for (int c = cols - 2; c >= 0; --c) out.push_back((rows - 1) * cols + c);
  for (int r = rows - 2; r >= 1; --r) out.push_back(r * cols);
  return out;
}

std::string spreadsheet_label(int index) {
  if (index < 0) throw InvalidArgument("label index must be non-negative");
  std::string s;
  for (int i = index + 1; i > 0; i = (i - 1) / 26) s.insert(s.begin(), static_cast<char>('A' + (i - 1) % 26));
  return s;
}

std::string MapInstance::label(int node) const {
  const auto p = perimeter();
  const auto it = std::find(p.begin(), p.end(), node);
  if (it == p.end()) throw InvalidArgument("node is not on the perimeter");
  return spreadsheet_label(static_cast<int>(it - p.begin()));
}

std::vector<int> buildings_touched(const std::vector<int>& path, const MapInstance& map) {
  std::set<Street> used;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) used.insert(street(path[i], path[i + 1]));
  std::vector<int> out;
  for (const auto& b : map.buildings) {
    const auto [h, v] = b.sides(map.cols);
    if (used.count(h) || used.count(v)) out.push_back(b.number);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MapInstance gen_ss3(const MapParams& p, SeededRng& rng) {
  if (p.rows < 4 || p.cols < 4) throw InvalidArgument("map needs at least 4 x 4 intersections");
  if (!(p.removal >= 0 && p.removal < 1)) throw InvalidArgument("removal fraction must lie in [0, 1)");
  if (p.buildings < 1 || p.buildings > (p.rows - 1) * (p.cols - 1)) throw InvalidArgument("building count does not fit the cells");
  for (int attempt = 0; attempt < 200; ++attempt) {
    MapInstance m;
    m.rows = p.rows;
    m.cols = p.cols;
    auto all = m.streets();
    const auto k = static_cast<std::size_t>(p.removal * static_cast<double>(all.size()));
    for (auto i : rng.sample_indices(all.size(), k)) m.removed.push_back(all[i]);
    std::sort(m.removed.begin(), m.removed.end());
    const auto kept = m.streets();
    const std::set<Street> alive(kept.begin(), kept.end());

    // Cells in random order; each takes a random corner whose two sides survive.
    const int cells = (p.rows - 1) * (p.cols - 1);
    for (auto cell : rng.sample_indices(static_cast<std::size_t>(cells), static_cast<std::size_t>(cells))) {
      if (static_cast<int>(m.buildings.size()) == p.buildings) break;
      std::vector<Corner> corners{Corner::nw, Corner::ne, Corner::sw, Corner::se};
      rng.shuffle(corners);
      for (auto corner : corners) {
        Building b{static_cast<int>(cell) / (p.cols - 1), static_cast<int>(cell) % (p.cols - 1), corner, 0};
        const auto [h, v] = b.sides(p.cols);
        if (alive.count(h) && alive.count(v)) {
          m.buildings.push_back(b);
          break;
        }
      }
    }
    if (static_cast<int>(m.buildings.size()) < p.buildings) continue;
    for (std::size_t i = 0; i < m.buildings.size(); ++i) m.buildings[i].number = static_cast<int>(i) + 1;

    const Graph g = m.graph();
    const auto rim = m.perimeter();
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < rim.size(); ++i)
      for (std::size_t j = i + 1; j < rim.size(); ++j) pairs.push_back({rim[i], rim[j]});
    rng.shuffle(pairs);
    for (auto [s, t] : pairs) {
      const auto pc = count_shortest_paths(g, s, t);
      if (!pc || pc->count != 1 || pc->distance < p.min_distance) continue;
      const auto touched = buildings_touched(pc->geodesic, m);
      if (touched.size() != 1) continue;
      if (rng.bernoulli(0.5)) std::swap(s, t);
      m.start = s;
      m.end = t;
      m.geodesic = count_shortest_paths(g, s, t)->geodesic;
      m.answer = touched.front();
      return m;
    }
  }
  throw GenerationFailed("SS3 found no terminal pair with a unique one-building route", rng.seed());
}

Scene map_scene(const MapInstance& m) {
  const double margin = 80, span = kCanvas - 2 * margin;
  const double step = span / (std::max(m.rows, m.cols) - 1);
  Scene sc;
  auto at = [&](int node) {
    return geom::Point{margin + (node % m.cols) * step, margin + (node / m.cols) * step};
  };
  for (auto [a, b] : m.streets()) sc.line(at(a), at(b), kStroke);
  for (auto [a, b] : m.removed) sc.add(CircleShape{0.5 * (at(a) + at(b)), step * 0.12, kStroke, 0, std::uint8_t{255}}, 1);
  const double q = step / 2;
  for (const auto& b : m.buildings) {
    const double x0 = margin + b.col * step, y0 = margin + b.row * step;
    // The quarter-square sits in the cell corner so two of its sides lie on streets.
    const double ix = (b.corner == Corner::ne || b.corner == Corner::se) ? x0 + step - q : x0;
    const double iy = (b.corner == Corner::sw || b.corner == Corner::se) ? y0 + step - q : y0;
    sc.add(PolygonShape{{{ix, iy}, {ix + q, iy}, {ix + q, iy + q}, {ix, iy + q}}, std::uint8_t{255}, kStroke, 0});
    sc.add(TextShape{std::to_string(b.number), {ix + q / 2, iy + q / 2}, q * 0.5, 2, 0}, 1);
  }
  const auto rim = m.perimeter();
  for (std::size_t i = 0; i < rim.size(); ++i) {
    const auto p = at(rim[i]);
    const int r = rim[i] / m.cols, c = rim[i] % m.cols;
    geom::Point off{0, 0};
    if (r == 0) off.y -= 1;
    if (r == m.rows - 1) off.y += 1;
    if (c == 0) off.x -= 1;
    if (c == m.cols - 1) off.x += 1;
    sc.add(TextShape{spreadsheet_label(static_cast<int>(i)), p + 34.0 * off, 22, 2, 0});
  }
  return sc;
}

namespace {

const char* corner_name(Corner c) {
  switch (c) {
    case Corner::nw: return "nw";
    case Corner::ne: return "ne";
    case Corner::sw: return "sw";
    default: return "se";
  }
}

Corner parse_corner(const std::string& s) {
  if (s == "nw") return Corner::nw;
  if (s == "ne") return Corner::ne;
  if (s == "sw") return Corner::sw;
  if (s == "se") return Corner::se;
  throw InvalidArgument("unknown building corner '" + s + "'");
}

}  // namespace

nlohmann::json to_json(const MapInstance& m) {
  nlohmann::json j{{"rows", m.rows}, {"cols", m.cols}, {"start", m.start}, {"end", m.end}, {"answer", m.answer},
                   {"start_label", m.label(m.start)}, {"end_label", m.label(m.end)}, {"geodesic", m.geodesic}};
  j["removed"] = nlohmann::json::array();
  for (auto [a, b] : m.removed) j["removed"].push_back({a, b});
  j["buildings"] = nlohmann::json::array();
  for (const auto& b : m.buildings)
    j["buildings"].push_back({{"row", b.row}, {"col", b.col}, {"corner", corner_name(b.corner)}, {"number", b.number}});
  return j;
}

MapInstance map_from_json(const nlohmann::json& j) {
  MapInstance m;
  m.rows = j.at("rows");
  m.cols = j.at("cols");
  m.start = j.at("start");
  m.end = j.at("end");
  m.answer = j.at("answer");
  m.geodesic = j.at("geodesic").get<std::vector<int>>();
  for (const auto& e : j.at("removed")) m.removed.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  for (const auto& b : j.at("buildings"))
    m.buildings.push_back({b.at("row"), b.at("col"), parse_corner(b.at("corner")), b.at("number")});
  return m;
}

}  // namespace visfactor::mapplan
