#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "visfactor/error.hpp"
#include "visfactor/folding.hpp"

using namespace visfactor;
using namespace visfactor::folding;

namespace {

RPoint pt(std::int64_t xn, std::int64_t xd, std::int64_t yn, std::int64_t yd) { return {Rational(xn, xd), Rational(yn, yd)}; }

}  // namespace

TEST_CASE("vertical half fold moves a hole") {
  FoldState s = FoldState::flat();
  s.holes.push_back(pt(3, 4, 1, 2));
  // Centroid on the axis: the half holding (0, 0) stays.
  FoldState f = fold(s, FoldAxis::vertical(Rational(1, 2)));
  CHECK(f.holes[0] == pt(1, 4, 1, 2));
  CHECK(f.area() == Rational(1));
  CHECK(f.outline().size() == 4);
  FoldState back = unfold(f);
  CHECK(back.holes == s.holes);
  CHECK(back.outline() == s.outline());
}

TEST_CASE("diagonal fold leaves the triangle holding the origin") {
  FoldState f = fold(FoldState::flat(), FoldAxis::diagonal(1, Rational(0)));
  RPolygon o = f.outline();
  std::sort(o.begin(), o.end());
  // Half-plane clip: the lexicographically smallest vertex (0,0) is on the
  // axis, so (0,1) decides and the upper-left triangle stays.
  CHECK(o == RPolygon{pt(0, 1, 0, 1), pt(0, 1, 1, 1), pt(1, 1, 1, 1)});
  CHECK(f.creases.size() == 1);
  CHECK(f.layers.size() == 2);
}

TEST_CASE("off-center fold keeps the bigger side") {
  FoldState f = fold(FoldState::flat(), FoldAxis::horizontal(Rational(1, 4)));
  RPolygon o = f.outline();
  std::sort(o.begin(), o.end());
  CHECK(o == RPolygon{pt(0, 1, 1, 4), pt(0, 1, 1, 1), pt(1, 1, 1, 4), pt(1, 1, 1, 1)});
  CHECK(layers_at(f, pt(1, 2, 3, 8)) == 2);
  CHECK(layers_at(f, pt(1, 2, 7, 8)) == 1);
  CHECK_THROWS_AS(layers_at(f, pt(1, 2, 1, 4)), InvalidArgument);
  CHECK_THROWS_AS(layers_at(f, pt(1, 2, 1, 8)), InvalidArgument);
  CHECK_THROWS_AS(fold(f, FoldAxis::horizontal(Rational(1, 8))), InvalidArgument);
}

TEST_CASE("punch counts") {
  const FoldState flat = FoldState::flat();
  CHECK(punch_and_unfold(flat, {pt(5, 16, 7, 16)}) == std::vector<RPoint>{pt(5, 16, 7, 16)});
  const FoldState one = fold(flat, FoldAxis::vertical(Rational(1, 2)));
  const auto holes = punch_and_unfold(one, {pt(3, 16, 9, 16)});
  REQUIRE(holes.size() == 2);
  CHECK(holes[0] == pt(3, 16, 9, 16));
  CHECK(holes[1] == geom::reflect_across(holes[0], FoldAxis::vertical(Rational(1, 2))));
  CHECK_THROWS_AS(punch_and_unfold(one, {pt(13, 16, 9, 16)}), InvalidArgument);
}

TEST_CASE("union outline of touching squares") {
  const RPolygon a{pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(1, 1, 1, 1), pt(0, 1, 1, 1)};
  const RPolygon b{pt(1, 1, 0, 1), pt(2, 1, 0, 1), pt(2, 1, 1, 1), pt(1, 1, 1, 1)};
  CHECK(exact::signed_area(union_outline({a, b})) == Rational(2));
  CHECK(union_outline({a, b}).size() == 4);
  CHECK(exact::signed_area(union_outline({a, a})) == Rational(1));
  const RPolygon c{pt(1, 2, 1, 2), pt(3, 2, 1, 2), pt(3, 2, 3, 2), pt(1, 2, 3, 2)};
  CHECK(exact::signed_area(union_outline({a, c})) == Rational(7, 4));
}

TEST_CASE("refold round trip and independent layer counts") {
  int total_holes = 0;
  for (int s = 0; s < 200; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s) + 4000);
    const int folds = 1 + s % 5;
    FoldState state = FoldState::flat();
    for (int k = 0; k < folds; ++k) {
      state = fold(state, random_axis(state, rng));
      REQUIRE(state.area() == Rational(1));
    }
    const auto sites = punch_sites(state);
    REQUIRE_FALSE(sites.empty());
    std::vector<RPoint> punches;
    for (auto i : rng.sample_indices(sites.size(), std::min<std::size_t>(sites.size(), 1 + s % 3))) punches.push_back(sites[i]);
    const auto holes = punch_and_unfold(state, punches);
    CHECK(holes == oracle::holes(state, punches));

    std::size_t layers = 0;
    for (const auto& p : punches) layers += static_cast<std::size_t>(layers_at(state, p));
    CHECK(holes.size() == layers);

    std::vector<RPoint> landed, expected;
    for (const auto& h : holes) {
      CHECK(oracle::in_unit_square(h));
      landed.push_back(refold(state, h));
    }
    for (const auto& p : punches)
      for (int i = 0; i < layers_at(state, p); ++i) expected.push_back(p);
    std::sort(landed.begin(), landed.end());
    std::sort(expected.begin(), expected.end());
    CHECK(landed == expected);
    total_holes += static_cast<int>(holes.size());

    const FoldState back = unfold(state);
    CHECK(back.history.size() == state.history.size() - 1);
    CHECK(back.area() == Rational(1));
  }
  CHECK(total_holes > 400);
}

TEST_CASE("vz2 items") {
  for (int s = 0; s < 60; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s));
    const Vz2Item item = gen_vz2({}, rng);
    REQUIRE(item.candidates.size() == 5);
    CHECK(item.axes.size() >= 1);
    CHECK(item.axes.size() <= 3);
    const auto truth = oracle::holes(item.state(), item.punches);
    CHECK(item.flat_holes == truth);
    int trues = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& c = item.candidates[i];
      trues += c.truth();
      CHECK((c.holes == truth) == c.truth());
      for (std::size_t j = i + 1; j < 5; ++j) CHECK(item.candidates[j].holes != c.holes);
    }
    CHECK(trues == 1);
    const Vz2Item back = vz2_from_json(to_json(item));
    CHECK(back.axes == item.axes);
    CHECK(back.truths() == item.truths());
  }
}

TEST_CASE("corruption policy") {
  SeededRng rng(8);
  const std::vector<RPoint> one{pt(1, 16, 1, 16)};
  CHECK(corrupt(one, rng).corruption == Corruption::displaced);
  // Every sheet position taken: only a drop is left.
  std::vector<RPoint> full;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) full.push_back(pt(2 * i + 1, 16, 2 * j + 1, 16));
  const auto c = corrupt(full, rng);
  CHECK(c.corruption == Corruption::dropped);
  CHECK(c.holes.size() == 63);
}

TEST_CASE("vz2 parameters and scenes") {
  SeededRng rng(2);
  Vz2Params bad;
  bad.max_folds = 6;
  CHECK_THROWS_AS(gen_vz2(bad, rng), InvalidArgument);
  Vz2Params hard;
  hard.min_folds = 3;
  hard.max_folds = 5;
  const Vz2Item item = gen_vz2(hard, rng);
  const Image seq = render(sequence_scene(item));
  CHECK(seq.width == 300 * static_cast<int>(item.axes.size()));
  CHECK(count_dark(seq) > 0);
  CHECK(count_dark(render(candidate_scene(item.candidates[0]))) > 0);
  CHECK_THROWS_AS(axis_from_json(nlohmann::json{{"kind", "spiral"}, {"offset", "0"}}), InvalidArgument);
}
