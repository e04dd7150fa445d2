#include "visfactor/memory.hpp"

#include <cmath>
#include <set>

#include "visfactor/closure.hpp"
#include "visfactor/error.hpp"
#include "visfactor/occlusion.hpp"
#include "visfactor/spatial.hpp"

namespace visfactor::memory {
namespace {

constexpr int kGap = 20, kNumberW = 110, kMargin = 30, kCellH = kTilePx + 30;
constexpr int kCellW = kTilePx + kGap + kNumberW + 30;

struct Tile {
  Image image;
  std::string id;
};

std::vector<Tile> semantic_tiles(int n, SeededRng& rng) {
  const auto& lib = occlusion::AssetLibrary::builtin();
  if (static_cast<std::size_t>(n) > lib.size()) throw InvalidArgument("not enough silhouette assets for " + std::to_string(n) + " pairs");
  std::vector<Tile> out;
  for (auto i : rng.sample_indices(lib.size(), static_cast<std::size_t>(n)))
    out.push_back({occlusion::render_asset(lib.at(i), kTilePx), lib.at(i).label});
  return out;
}

// "Lines arranged in a 3x3 grid": connected 3x3 line patterns, distinct edge sets.
std::vector<Tile> cf2_tiles(int n, SeededRng& rng) {
  std::vector<Tile> out;
  std::set<closure::EdgeList> seen;
  for (int attempt = 0; static_cast<int>(out.size()) < n; ++attempt) {
    if (attempt > 100 * n + 1000) throw GenerationFailed("MA1 could not draw distinct 3x3 patterns", rng.seed());
    auto g = closure::gen_cf2(3, 3, 0.45, 0.1, rng);
    if (!seen.insert(g.edges).second) continue;
    Scene sc = closure::pattern_scene(g, closure::pattern_unit(3, 3));
    out.push_back({render(sc, kTilePx, kTilePx), closure::edges_to_json(g.edges).dump()});
  }
  return out;
}

std::vector<Tile> abstract_tiles(int n, SeededRng& rng) {
  std::vector<Tile> out;
  spatial::PolygonParams p;
  p.min_vertices = 5;
  p.max_vertices = 8;
  for (int i = 0; i < n; ++i) {
    const auto poly = spatial::gen_polygon(p, rng);
    out.push_back({render(spatial::polygon_scene(poly), kTilePx, kTilePx), spatial::points_to_json(poly).dump()});
  }
  return out;
}

}  // namespace

TileSource parse_tile_source(const std::string& name) {
  if (name == "semantic") return TileSource::semantic;
  if (name == "cf2") return TileSource::cf2;
  if (name == "abstract") return TileSource::abstract;
  throw InvalidArgument("unknown tile source '" + name + "' (semantic, cf2, abstract)");
}

std::string to_string(TileSource s) {
  switch (s) {
    case TileSource::semantic: return "semantic";
    case TileSource::cf2: return "cf2";
    default: return "abstract";
  }
}

std::pair<int, int> grid_for(int n) {
  if (n < 1) throw InvalidArgument("grid needs at least one cell");
  std::pair<int, int> best{n, 1};
  auto key = [](int r, int c) { return std::make_tuple(std::abs(r - c), r * c, r); };
  for (int r = 1; r <= n; ++r)
    for (int c = (n + r - 1) / r; c <= std::max(r, (n + r - 1) / r); ++c)
      if (key(r, c) < key(best.first, best.second)) best = {r, c};
  return best;
}

Ma1Item gen_ma1(int n, TileSource source, SeededRng& rng) {
  if (n < 1 || n > 90) throw InvalidArgument("MA1 pair count must lie in [1, 90]");
  std::vector<Tile> tiles = source == TileSource::semantic ? semantic_tiles(n, rng)
                            : source == TileSource::cf2    ? cf2_tiles(n, rng)
                                                           : abstract_tiles(n, rng);
  Ma1Item item;
  std::tie(item.sheet.rows, item.sheet.cols) = grid_for(n);
  for (auto i : rng.sample_indices(90, static_cast<std::size_t>(n))) item.sheet.numbers.push_back(static_cast<int>(i) + 10);
  for (auto& t : tiles) {
    item.sheet.tiles.push_back(std::move(t.image));
    item.sheet.tile_ids.push_back(std::move(t.id));
  }
  item.probe = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
  item.answer = item.sheet.numbers[item.probe];
  return item;
}

Rect tile_rect(const PairSheet& sheet, std::size_t i) {
  const int r = static_cast<int>(i) / sheet.cols, c = static_cast<int>(i) % sheet.cols;
  return {kMargin + c * kCellW, kMargin + r * kCellH, kTilePx, kTilePx};
}

Scene study_scene(const PairSheet& sheet) {
  Scene sc(2 * kMargin + sheet.cols * kCellW, 2 * kMargin + sheet.rows * kCellH);
  for (std::size_t i = 0; i < sheet.tiles.size(); ++i) {
    const Rect r = tile_rect(sheet, i);
    sc.tile(sheet.tiles[i], r.x, r.y, r.w, r.h);
    sc.text(std::to_string(sheet.numbers[i]), {r.x + r.w + kGap + kNumberW / 2.0, r.y + r.h / 2.0}, 60, 5);
  }
  return sc;
}

Image probe_image(const Ma1Item& item) { return item.sheet.tiles.at(item.probe); }

}  // namespace visfactor::memory
