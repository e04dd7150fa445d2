#include <doctest.h>

#include <cmath>
#include <set>

#include "visfactor/error.hpp"
#include "visfactor/memory.hpp"

using namespace visfactor;
using namespace visfactor::memory;

namespace {

// Exhaustive grid search: best |r - c|, then r * c, then r.
std::pair<int, int> brute_grid(int n) {
  int br = 0, bc = 0;
  for (int r = 1; r <= 100; ++r)
    for (int c = 1; c <= 100; ++c) {
      if (r * c < n) continue;
      if (br == 0 || std::abs(r - c) < std::abs(br - bc) ||
          (std::abs(r - c) == std::abs(br - bc) && (r * c < br * bc || (r * c == br * bc && r < br)))) {
        br = r;
        bc = c;
      }
    }
  return {br, bc};
}

void check_invariants(const Ma1Item& item, int n) {
  const auto& s = item.sheet;
  REQUIRE(s.tiles.size() == static_cast<std::size_t>(n));
  REQUIRE(s.numbers.size() == static_cast<std::size_t>(n));
  CHECK(s.rows * s.cols >= n);
  CHECK(std::make_pair(s.rows, s.cols) == brute_grid(n));
  CHECK(std::set<int>(s.numbers.begin(), s.numbers.end()).size() == s.numbers.size());
  for (int v : s.numbers) {
    CHECK(v >= 10);
    CHECK(v <= 99);
  }
  CHECK(std::set<std::string>(s.tile_ids.begin(), s.tile_ids.end()).size() == s.tile_ids.size());
  const Image study = render(study_scene(s));
  const Image probe = probe_image(item);
  int identical = 0;
  for (std::size_t i = 0; i < s.tiles.size(); ++i) {
    const Rect r = tile_rect(s, i);
    const Image cell = study.crop(r.x, r.y, r.w, r.h);
    if (cell == probe) {
      ++identical;
      CHECK(s.numbers[i] == item.answer);
    }
  }
  CHECK(identical == 1);
  CHECK(std::count(s.numbers.begin(), s.numbers.end(), item.answer) == 1);
}

}  // namespace

TEST_CASE("grid choice matches exhaustive search") {
  for (int n = 1; n <= 90; ++n) CHECK(grid_for(n) == brute_grid(n));
  CHECK(grid_for(21) == std::make_pair(5, 5));
  CHECK(grid_for(1) == std::make_pair(1, 1));
  CHECK(grid_for(50) == std::make_pair(8, 8));
}

TEST_CASE("single pair") {
  SeededRng rng(1);
  const auto item = gen_ma1(1, TileSource::semantic, rng);
  CHECK(item.sheet.rows == 1);
  CHECK(item.answer == item.sheet.numbers[0]);
}

TEST_CASE("pair count bounds") {
  SeededRng rng(1);
  CHECK_THROWS_AS(gen_ma1(0, TileSource::cf2, rng), InvalidArgument);
  CHECK_THROWS_AS(gen_ma1(91, TileSource::cf2, rng), InvalidArgument);
  CHECK_THROWS_AS(parse_tile_source("photos"), InvalidArgument);
  CHECK(parse_tile_source(to_string(TileSource::abstract)) == TileSource::abstract);
}

TEST_CASE("sweep sizes hold every invariant") {
  for (int n : {10, 20, 40, 80}) {
    for (int s = 0; s < 100; ++s) {
      SeededRng rng(SeededRng::derive(5, "ma1", static_cast<std::uint64_t>(s * 100 + n)));
      check_invariants(gen_ma1(n, TileSource::cf2, rng), n);
    }
  }
}

TEST_CASE("other tile sources hold every invariant") {
  for (int s = 0; s < 10; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s));
    check_invariants(gen_ma1(21, TileSource::semantic, rng), 21);
    check_invariants(gen_ma1(50, TileSource::abstract, rng), 50);
  }
  SeededRng rng(3);
  check_invariants(gen_ma1(90, TileSource::semantic, rng), 90);
}

TEST_CASE("generation is deterministic") {
  SeededRng a(11), b(11);
  const auto x = gen_ma1(21, TileSource::semantic, a), y = gen_ma1(21, TileSource::semantic, b);
  CHECK(x.sheet.numbers == y.sheet.numbers);
  CHECK(x.sheet.tile_ids == y.sheet.tile_ids);
  CHECK(x.probe == y.probe);
}
