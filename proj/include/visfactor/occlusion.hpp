#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "visfactor/image.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::occlusion {

/// Vector line-art object drawn in a 100 x 100 box. `aliases` lists every
/// accepted name, label first.
struct Asset {
  std::string label;
  std::vector<std::string> aliases;
  nlohmann::json shapes;
};

class AssetLibrary {
 public:
  static AssetLibrary load(const std::filesystem::path& path);
  static AssetLibrary from_json(const nlohmann::json& j);
  /// Cached copy of the bundled silhouettes.
  static const AssetLibrary& builtin();

  std::size_t size() const noexcept { return assets_.size(); }
  const Asset& at(std::size_t i) const { return assets_.at(i); }
  const std::vector<Asset>& assets() const noexcept { return assets_; }

 private:
  std::vector<Asset> assets_;
};

Scene asset_scene(const Asset& asset);
Image render_asset(const Asset& asset, int size_px);

class WordList {
 public:
  static WordList load(const std::filesystem::path& path);
  static const WordList& builtin();
  explicit WordList(std::vector<std::string> words);

  const std::vector<std::string>& words() const noexcept { return words_; }
  /// Uniform draw among words whose length is in [min_len, max_len].
  const std::string& sample(int min_len, int max_len, SeededRng& rng) const;

 private:
  std::vector<std::string> words_;
};

/// Occluder counts and sizes are base + round(gain * s) for severity s in
/// [0, 1]. Sizes are pixels of the stimulus image.
struct Laws {
  int stroke_base = 2, stroke_gain = 18;
  int stroke_width_base = 2, stroke_width_gain = 6;
  int segment_base = 3, segment_gain = 12;
  int segment_width_base = 2, segment_width_gain = 6;
  int blotch_base = 3, blotch_gain = 12;
  int blotch_radius_base = 2, blotch_radius_gain = 8;
  int rect_gain = 12;
  int clutter_gain = 40;
  double rect_max_fraction = 0.25;
  double clutter_width = 2;

  static Laws from_json(const nlohmann::json& j);
};

int law(int base, int gain, double s);
void check_severity(double s);

/// White strokes across a silhouette. s = 0 returns the input unchanged.
Image occlude_silhouette(const Image& img, double s, SeededRng& rng, const Laws& laws = {});
/// White segments and blotches over rendered word ink.
Image conceal_word(const Image& img, double s, SeededRng& rng, const Laws& laws = {});
/// White rectangles, then short black clutter segments.
Image snowy_picture(const Image& img, double s, SeededRng& rng, const Laws& laws = {});

Image render_word(const std::string& word);

constexpr int kSilhouettePx = 300;

struct Cs1Item {
  std::size_t asset = 0;
  double severity = 0;
  Image image;
};
struct Cs2Item {
  std::string word;
  double severity = 0;
  Image image;
};
struct Cs3Item {
  std::size_t asset = 0;
  double severity = 0;
  Image image;
};

Cs1Item gen_cs1(const AssetLibrary& lib, std::size_t asset, double s, SeededRng& rng, const Laws& laws = {});
Cs2Item gen_cs2(const WordList& words, int min_len, int max_len, double s, SeededRng& rng, const Laws& laws = {});
Cs3Item gen_cs3(const AssetLibrary& lib, std::size_t asset, double s, SeededRng& rng, const Laws& laws = {});

}  // namespace visfactor::occlusion
