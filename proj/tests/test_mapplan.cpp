#include <doctest.h>

#include <functional>
#include <set>

#include "oracles.hpp"
#include "visfactor/error.hpp"
#include "visfactor/mapplan.hpp"

using namespace visfactor;
using namespace visfactor::mapplan;

namespace {

// Fresh geometry: a building is touched when a path step runs along one of
// the two cell-edge halves it occupies.
std::vector<int> touched_oracle(const std::vector<int>& path, const MapInstance& m) {
  std::vector<int> out;
  for (const auto& b : m.buildings) {
    const bool east = b.corner == Corner::ne || b.corner == Corner::se;
    const bool south = b.corner == Corner::sw || b.corner == Corner::se;
    const int cr = b.row + (south ? 1 : 0), cc = b.col + (east ? 1 : 0);
    bool hit = false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const int r1 = path[i] / m.cols, c1 = path[i] % m.cols, r2 = path[i + 1] / m.cols, c2 = path[i + 1] % m.cols;
      if (r1 == r2 && r1 == cr && std::min(c1, c2) == b.col) hit = true;  // horizontal cell edge at the corner row
      if (c1 == c2 && c1 == cc && std::min(r1, r2) == b.row) hit = true;  // vertical cell edge at the corner column
    }
    if (hit) out.push_back(b.number);
  }
  return out;
}

}  // namespace

TEST_CASE("path counter basics") {
  Graph line(3);
  line.connect(0, 1);
  line.connect(1, 2);
  auto pc = count_shortest_paths(line, 0, 2);
  REQUIRE(pc);
  CHECK(pc->distance == 2);
  CHECK(pc->count == 1);
  CHECK(pc->geodesic == std::vector<int>{0, 1, 2});

  Graph square(4);  // 0-1 / 2-3 with sides
  square.connect(0, 1);
  square.connect(0, 2);
  square.connect(1, 3);
  square.connect(2, 3);
  pc = count_shortest_paths(square, 0, 3);
  CHECK(pc->distance == 2);
  CHECK(pc->count == 2);
  CHECK(pc->geodesic.empty());

  Graph split(2);
  CHECK_FALSE(count_shortest_paths(split, 0, 1));
}

TEST_CASE("path counts on open grids are binomials") {
  MapInstance m;
  m.rows = 12;
  m.cols = 12;
  auto pc = count_shortest_paths(m.graph(), 0, 143);
  CHECK(pc->distance == 22);
  CHECK(pc->count == BigInt(705432));  // C(22, 11)
  m.rows = 40;
  m.cols = 40;
  pc = count_shortest_paths(m.graph(), 0, 40 * 40 - 1);
  CHECK(pc->count == BigInt("27217014869199032015600"));  // C(78, 39)
}

TEST_CASE("path counter agrees with DFS enumeration") {
  for (int s = 0; s < 300; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s));
    MapInstance m;
    m.rows = 5;
    m.cols = 5;
    const auto all = m.streets();
    for (auto i : rng.sample_indices(all.size(), rng.below(all.size() / 2))) m.removed.push_back(all[i]);
    const Graph g = m.graph();
    const int a = static_cast<int>(rng.below(25)), b = static_cast<int>(rng.below(25));
    const auto pc = count_shortest_paths(g, a, b);
    const auto [dist, paths] = oracle::dfs_shortest(g, a, b);
    if (paths.empty()) {
      CHECK_FALSE(pc);
      continue;
    }
    REQUIRE(pc);
    CHECK(pc->distance == dist);
    CHECK(pc->count == BigInt(paths.size()));
    if (paths.size() == 1) CHECK(pc->geodesic == paths[0]);
  }
}

TEST_CASE("spreadsheet labels") {
  CHECK(spreadsheet_label(0) == "A");
  CHECK(spreadsheet_label(25) == "Z");
  CHECK(spreadsheet_label(26) == "AA");
  CHECK(spreadsheet_label(27) == "AB");
  CHECK(spreadsheet_label(701) == "ZZ");
  CHECK(spreadsheet_label(702) == "AAA");
}

TEST_CASE("perimeter labeling is a clockwise bijection") {
  MapInstance m;
  m.rows = 4;
  m.cols = 5;
  const auto rim = m.perimeter();
  CHECK(rim.size() == 14);
  CHECK(std::set<int>(rim.begin(), rim.end()).size() == rim.size());
  CHECK(rim.front() == 0);
  CHECK(rim[4] == 4);   // top-right
  CHECK(rim[7] == 19);  // bottom-right
  CHECK(m.label(0) == "A");
  CHECK(m.label(5) == "N");
  CHECK_THROWS_AS(m.label(6), InvalidArgument);
}

TEST_CASE("straight street past one building") {
  MapInstance m;
  m.rows = 4;
  m.cols = 4;
  m.buildings.push_back({0, 1, Corner::nw, 1});  // top side is street 1-2
  m.buildings.push_back({2, 2, Corner::se, 2});
  const auto pc = count_shortest_paths(m.graph(), 0, 3);
  REQUIRE(pc->count == 1);
  CHECK(pc->geodesic == std::vector<int>{0, 1, 2, 3});
  CHECK(buildings_touched(pc->geodesic, m) == std::vector<int>{1});
}

TEST_CASE("corner contact does not count") {
  MapInstance m;
  m.rows = 4;
  m.cols = 4;
  m.buildings.push_back({1, 1, Corner::nw, 1});  // sides 5-6 and 5-9
  // Path through node 5 using neither side.
  CHECK(buildings_touched({1, 5, 4}, m).empty());
  CHECK(buildings_touched({4, 5, 6}, m) == std::vector<int>{1});
  CHECK(buildings_touched({9, 5, 1}, m) == std::vector<int>{1});
}

TEST_CASE("generated maps satisfy every invariant") {
  MapParams p{6, 6, 0.15, 6, 3};
  for (int s = 0; s < 200; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s));
    const auto m = gen_ss3(p, rng);
    const Graph g = m.graph();
    const auto [dist, paths] = oracle::dfs_shortest(g, m.start, m.end);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == m.geodesic);
    CHECK(dist >= 3);
    CHECK(touched_oracle(m.geodesic, m) == std::vector<int>{m.answer});
    CHECK(buildings_touched(m.geodesic, m) == std::vector<int>{m.answer});
    CHECK(m.removed.size() == static_cast<std::size_t>(0.15 * 60));
    std::set<std::pair<int, int>> cells;
    for (const auto& b : m.buildings) cells.insert({b.row, b.col});
    CHECK(cells.size() == 6);
    // Reversed terminals: same unique route, same building.
    const auto back = count_shortest_paths(g, m.end, m.start);
    REQUIRE(back->count == 1);
    CHECK(buildings_touched(back->geodesic, m) == std::vector<int>{m.answer});
    // Removing any route street lengthens or breaks the route.
    for (std::size_t i = 0; i + 1 < m.geodesic.size(); ++i) {
      MapInstance cut = m;
      cut.removed.push_back({std::min(m.geodesic[i], m.geodesic[i + 1]), std::max(m.geodesic[i], m.geodesic[i + 1])});
      const auto pc = count_shortest_paths(cut.graph(), m.start, m.end);
      CHECK((!pc || pc->distance > dist));
    }
    if (s < 5) {
      const auto j = to_json(m);
      CHECK(to_json(map_from_json(j)) == j);
      CHECK(count_dark(render(map_scene(m))) > 0);
    }
  }
}

TEST_CASE("presets generate") {
  for (auto p : {MapParams{5, 5, 0.10, 4, 3}, MapParams{7, 7, 0.15, 8, 3}, MapParams{9, 9, 0.20, 12, 3}}) {
    for (int s = 0; s < 20; ++s) {
      SeededRng rng(static_cast<std::uint64_t>(s) + 900);
      const auto m = gen_ss3(p, rng);
      CHECK(count_shortest_paths(m.graph(), m.start, m.end)->count == 1);
    }
  }
}

TEST_CASE("bad map parameters") {
  SeededRng rng(1);
  CHECK_THROWS_AS(gen_ss3({3, 5, 0.1, 2, 3}, rng), InvalidArgument);
  CHECK_THROWS_AS(gen_ss3({5, 5, 1.0, 2, 3}, rng), InvalidArgument);
  CHECK_THROWS_AS(gen_ss3({5, 5, 0.1, 17, 3}, rng), InvalidArgument);
}
