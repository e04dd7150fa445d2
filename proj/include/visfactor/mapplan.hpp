#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::mapplan {

using BigInt = boost::multiprecision::cpp_int;

/// Undirected unit-weight graph on nodes 0..n-1.
struct Graph {
  std::vector<std::vector<int>> adj;
  explicit Graph(int n = 0) : adj(static_cast<std::size_t>(n)) {}
  void connect(int a, int b);
  int size() const { return static_cast<int>(adj.size()); }
};

struct PathCount {
  int distance = 0;
  BigInt count = 0;
  std::vector<int> geodesic;  // filled only when count == 1
};

/// Layered BFS with path-count accumulation; nullopt when t is unreachable.
std::optional<PathCount> count_shortest_paths(const Graph& g, int s, int t);

/// Street between two intersections, stored with a < b (node = row * cols + col).
using Street = std::pair<int, int>;

enum class Corner { nw, ne, sw, se };

struct Building {
  int row = 0;  // cell row, 0 .. rows-2
  int col = 0;
  Corner corner = Corner::nw;
  int number = 0;
  /// The two streets whose sides the quarter-square abuts.
  std::pair<Street, Street> sides(int cols) const;
};

struct MapInstance {
  int rows = 0;  // intersections per column
  int cols = 0;
  std::vector<Street> removed;
  std::vector<Building> buildings;
  int start = 0;
  int end = 0;
  std::vector<int> geodesic;
  int answer = 0;

  std::vector<Street> streets() const;  // surviving
  Graph graph() const;
  /// Perimeter intersections clockwise from the top-left corner.
  std::vector<int> perimeter() const;
  std::string label(int node) const;
};

/// A, B, ..., Z, AA, AB, ...
std::string spreadsheet_label(int index);

/// Buildings whose abutting streets the path traverses (corner contact alone
/// does not count), sorted by number.
std::vector<int> buildings_touched(const std::vector<int>& path, const MapInstance& map);

struct MapParams {
  int rows = 7;
  int cols = 7;
  double removal = 0.15;
  int buildings = 8;
  int min_distance = 3;
};

/// Throws GenerationFailed when 200 maps in a row admit no terminal pair.
MapInstance gen_ss3(const MapParams& p, SeededRng& rng);

Scene map_scene(const MapInstance& map);

nlohmann::json to_json(const MapInstance& map);
MapInstance map_from_json(const nlohmann::json& j);

}  // namespace visfactor::mapplan
