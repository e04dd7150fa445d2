#pragma once

#include <string>
#include <utility>
#include <vector>

#include "visfactor/image.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::memory {

enum class TileSource { semantic, cf2, abstract };

TileSource parse_tile_source(const std::string& name);
std::string to_string(TileSource s);

/// Smallest |r - c| with r * c >= n, then smallest r * c, then smallest r.
std::pair<int, int> grid_for(int n);

constexpr int kTilePx = 160;

struct PairSheet {
  int rows = 0;
  int cols = 0;
  std::vector<Image> tiles;
  std::vector<std::string> tile_ids;  // asset label, edge list or vertex list
  std::vector<int> numbers;           // numbers[i] pairs with tiles[i], row-major
};

struct Ma1Item {
  PairSheet sheet;
  std::size_t probe = 0;
  int answer = 0;
};

/// N pairs of distinct tiles and distinct numbers in [10, 99].
Ma1Item gen_ma1(int n, TileSource source, SeededRng& rng);

/// Pixel rectangle (x, y, w, h) of tile i on the study image.
struct Rect {
  int x, y, w, h;
};
Rect tile_rect(const PairSheet& sheet, std::size_t i);
Scene study_scene(const PairSheet& sheet);
Image probe_image(const Ma1Item& item);

}  // namespace visfactor::memory
