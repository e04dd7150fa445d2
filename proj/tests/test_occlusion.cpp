#include <doctest.h>

#include <cmath>
#include <set>

#include "visfactor/error.hpp"
#include "visfactor/occlusion.hpp"

using namespace visfactor;
using namespace visfactor::occlusion;

namespace {

// Pixels black in `before` and white in `after`.
std::size_t erased(const Image& before, const Image& after) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < before.pixels.size(); ++i) n += before.pixels[i] < 128 && after.pixels[i] >= 128;
  return n;
}

std::size_t added(const Image& before, const Image& after) { return erased(after, before); }

}  // namespace

TEST_CASE("bundled assets load and render") {
  const auto& lib = AssetLibrary::builtin();
  CHECK(lib.size() >= 60);
  std::set<std::string> labels;
  for (const auto& a : lib.assets()) {
    labels.insert(a.label);
    CHECK(a.aliases.front() == a.label);
    const Image img = render_asset(a, 120);
    const auto ink = count_dark(img);
    CHECK_MESSAGE(ink > 120 * 120 / 20, a.label);
    CHECK_MESSAGE(ink < 120 * 120 * 3 / 4, a.label);
    CHECK(img.at(0, 0) == 255);
  }
  CHECK(labels.size() == lib.size());
  CHECK_THROWS_AS(AssetLibrary::from_json({{"assets", {{{"label", "x"}, {"shapes", nlohmann::json::array()}}}}}), ConfigError);
}

TEST_CASE("zero severity is the identity") {
  const auto& lib = AssetLibrary::builtin();
  for (int seed = 0; seed < 20; ++seed) {
    SeededRng rng(static_cast<std::uint64_t>(seed));
    const Image img = render_asset(lib.at(static_cast<std::size_t>(seed) % lib.size()), kSilhouettePx);
    CHECK(occlude_silhouette(img, 0, rng) == img);
    CHECK(snowy_picture(img, 0, rng) == img);
    const Image word = render_word("garden");
    CHECK(conceal_word(word, 0, rng) == word);
    CHECK(encode_png(occlude_silhouette(img, 0, rng)) == encode_png(img));
  }
}

TEST_CASE("severity outside the unit interval is rejected") {
  SeededRng rng(1);
  const Image img = render_word("stone");
  CHECK_THROWS_AS(occlude_silhouette(img, -0.1, rng), InvalidArgument);
  CHECK_THROWS_AS(conceal_word(img, 1.5, rng), InvalidArgument);
  CHECK_THROWS_AS(snowy_picture(img, std::nan(""), rng), InvalidArgument);
}

TEST_CASE("occluder laws") {
  CHECK(law(2, 18, 0) == 2);
  CHECK(law(2, 18, 1) == 20);
  CHECK(law(2, 6, 0.5) == 5);
  CHECK(law(3, 12, 0.45) == 8);
  CHECK(law(0, 40, 0.2) == 8);
  const Laws l = Laws::from_json({{"stroke_gain", 5}, {"rect_max_fraction", 0.1}});
  CHECK(l.stroke_gain == 5);
  CHECK(l.rect_max_fraction == 0.1);
  CHECK(l.blotch_gain == 12);
}

TEST_CASE("heavier strokes erase more silhouette") {
  const auto& lib = AssetLibrary::builtin();
  std::size_t light = 0, heavy = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const Image img = render_asset(lib.at(static_cast<std::size_t>(seed) % lib.size()), kSilhouettePx);
    SeededRng a(static_cast<std::uint64_t>(seed)), b(static_cast<std::uint64_t>(seed));
    const auto e1 = erased(img, occlude_silhouette(img, 0.2, a));
    const auto e2 = erased(img, occlude_silhouette(img, 1.0, b));
    CHECK(e2 >= e1);
    light += e1;
    heavy += e2;
  }
  CHECK(heavy > light);
}

TEST_CASE("word concealment grows with severity") {
  const auto& words = WordList::builtin();
  std::vector<double> mean;
  for (int k = 1; k <= 9; ++k) {
    double total = 0;
    for (int seed = 0; seed < 100; ++seed) {
      SeededRng pick(static_cast<std::uint64_t>(seed));
      const Image img = render_word(words.sample(4, 8, pick));
      SeededRng rng(static_cast<std::uint64_t>(seed) + 500);
      total += static_cast<double>(erased(img, conceal_word(img, k / 10.0, rng))) / static_cast<double>(count_dark(img));
    }
    mean.push_back(total / 100);
  }
  for (std::size_t i = 1; i < mean.size(); ++i) CHECK(mean[i] >= mean[i - 1]);
  CHECK(mean.back() > mean.front());
}

TEST_CASE("snow clutter grows with severity") {
  const auto& lib = AssetLibrary::builtin();
  for (int seed = 0; seed < 30; ++seed) {
    const Image img = render_asset(lib.at(static_cast<std::size_t>(seed) * 3 % lib.size()), kSilhouettePx);
    std::size_t prev_clutter = 0;
    for (int k = 1; k <= 10; ++k) {
      SeededRng rng(static_cast<std::uint64_t>(seed));
      const Image out = snowy_picture(img, k / 10.0, rng);
      const auto clutter = added(img, out);
      CHECK(clutter >= prev_clutter);
      prev_clutter = clutter;
    }
    CHECK(prev_clutter > 0);
  }
}

TEST_CASE("snow rectangles respect the size cap") {
  Image black(200, 100, 0);
  Laws l;
  l.clutter_gain = 0;
  l.rect_gain = 1;
  for (int seed = 0; seed < 50; ++seed) {
    SeededRng rng(static_cast<std::uint64_t>(seed));
    const Image out = snowy_picture(black, 1.0, rng, l);
    int x0 = 1000, x1 = -1, y0 = 1000, y1 = -1;
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        if (out.at(x, y) == 255) x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    REQUIRE(x1 >= 0);
    CHECK(x1 - x0 + 1 <= 26);
    CHECK(y1 - y0 + 1 <= 26);
  }
}

TEST_CASE("generation is deterministic") {
  const auto& lib = AssetLibrary::builtin();
  SeededRng a(42), b(42);
  CHECK(gen_cs1(lib, 3, 0.45, a).image == gen_cs1(lib, 3, 0.45, b).image);
  CHECK(gen_cs3(lib, 7, 0.7, a).image == gen_cs3(lib, 7, 0.7, b).image);
  const auto w1 = gen_cs2(WordList::builtin(), 4, 8, 0.45, a), w2 = gen_cs2(WordList::builtin(), 4, 8, 0.45, b);
  CHECK(w1.word == w2.word);
  CHECK(w1.image == w2.image);
}

TEST_CASE("word sampling honours the length filter") {
  const auto& words = WordList::builtin();
  CHECK(words.words().size() >= 500);
  SeededRng rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto& w = words.sample(5, 6, rng);
    CHECK(w.size() >= 5);
    CHECK(w.size() <= 6);
  }
  CHECK_THROWS_AS(words.sample(30, 40, rng), InvalidArgument);
  CHECK_THROWS_AS(words.sample(6, 5, rng), InvalidArgument);
  CHECK_THROWS_AS(WordList({"Bad"}), ConfigError);
}
