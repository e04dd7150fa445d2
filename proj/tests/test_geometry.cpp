#include <doctest.h>

#include <cmath>
#include <set>

#include "visfactor/error.hpp"
#include "visfactor/geometry.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

using namespace visfactor;
using geom::Point;

namespace {

// Counts unordered pairs of distinct nodes at Chebyshev distance one.
std::size_t brute_edge_count(int m, int n) {
  std::size_t twice = 0;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c)
      for (int r2 = 0; r2 < m; ++r2)
        for (int c2 = 0; c2 < n; ++c2)
          if ((r != r2 || c != c2) && std::abs(r - r2) <= 1 && std::abs(c - c2) <= 1) ++twice;
  return twice / 2;
}

Scene random_scene(SeededRng& rng) {
  Scene s(200, 150);
  const int n = static_cast<int>(rng.uniform_int(1, 12));
  for (int i = 0; i < n; ++i) {
    Point a{rng.uniform(0, 200), rng.uniform(0, 150)}, b{rng.uniform(0, 200), rng.uniform(0, 150)};
    switch (rng.below(5)) {
      case 0: s.add(LineShape{{a, b}, rng.uniform(1, 6), 0, false, rng.bernoulli(0.3)}, static_cast<int>(rng.below(3))); break;
      case 1: s.add(CircleShape{a, rng.uniform(2, 40), rng.uniform(0, 4), 0, std::uint8_t{128}}); break;
      case 2: s.add(PolygonShape{{a, b, {rng.uniform(0, 200), rng.uniform(0, 150)}}}); break;
      case 3: s.text("A7", a, rng.uniform(10, 40)); break;
      default: {
        Image tile(16, 16, 255);
        for (int k = 0; k < 16; ++k) tile.at(k, k) = 0;
        s.add(TileShape{tile, a, {30, 10}, {-10, 30}, TileBlend::darken});
      }
    }
  }
  return s;
}

}  // namespace

TEST_CASE("admissible edge count matches enumeration") {
  for (int m = 2; m <= 8; ++m) {
    for (int n = 2; n <= 8; ++n) {
      const auto edges = geom::admissible_edges(m, n);
      CHECK(edges.size() == geom::admissible_edge_count(m, n));
      CHECK(edges.size() == brute_edge_count(m, n));
      std::set<geom::LatticeEdge> unique(edges.begin(), edges.end());
      CHECK(unique.size() == edges.size());
      for (const auto& e : edges) {
        CHECK(std::max(std::abs(e.a.row - e.b.row), std::abs(e.a.col - e.b.col)) == 1);
        CHECK(e.a < e.b);
      }
    }
  }
  CHECK(geom::admissible_edges(2, 2).size() == 6);
  CHECK(geom::admissible_edges(3, 3).size() == 20);
  CHECK_THROWS_AS(geom::admissible_edges(1, 5), InvalidArgument);
}

TEST_CASE("reflection examples") {
  const Point a = geom::reflect_across({0.2, 0.5}, geom::FoldAxis::vertical(Rational(1, 2)));
  CHECK(geom::near(a, {0.8, 0.5}));
  const Point b = geom::reflect_across({0.3, 0.3}, geom::FoldAxis::diagonal(1, Rational(0)));
  CHECK(geom::near(b, {0.3, 0.3}));
  const Point c = geom::reflect_across({0.1, 0.4}, geom::FoldAxis::diagonal(-1, Rational(1)));
  CHECK(geom::near(c, {0.6, 0.9}));
  const RPoint d = geom::reflect_across(RPoint{Rational(1, 10), Rational(2, 5)}, geom::FoldAxis::diagonal(-1, Rational(1)));
  CHECK(d == RPoint{Rational(3, 5), Rational(9, 10)});
}

TEST_CASE("reflection is an isometric involution") {
  SeededRng rng(7);
  const std::vector<geom::FoldAxis> axes{geom::FoldAxis::horizontal(Rational(1, 3)), geom::FoldAxis::vertical(Rational(3, 4)),
                                         geom::FoldAxis::diagonal(1, Rational(-1, 5)), geom::FoldAxis::diagonal(-1, Rational(6, 5))};
  for (const auto& axis : axes) {
    CHECK(axis.valid());
    for (int i = 0; i < 1000; ++i) {
      Point p{rng.uniform01(), rng.uniform01()}, q{rng.uniform01(), rng.uniform01()};
      Point rp = geom::reflect_across(p, axis), rq = geom::reflect_across(q, axis);
      CHECK(std::abs(geom::distance(p, q) - geom::distance(rp, rq)) < 1e-9);
      CHECK(geom::near(geom::reflect_across(rp, axis), p));
      CHECK(std::abs(geom::axis_side(p, axis) + geom::axis_side(rp, axis)) < 1e-9);
    }
  }
  CHECK_FALSE(geom::FoldAxis::vertical(Rational(1)).valid());
  CHECK_FALSE(geom::FoldAxis::diagonal(-1, Rational(0)).valid());
}

TEST_CASE("collinear overlap") {
  CHECK(geom::collinear_overlap({{0, 0}, {2, 2}}, {{1, 1}, {3, 3}}));
  CHECK_FALSE(geom::collinear_overlap({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
  CHECK_FALSE(geom::collinear_overlap({{0, 0}, {2, 2}}, {{2, 2}, {3, 1}}));
  CHECK_FALSE(geom::collinear_overlap({{0, 0}, {1, 1}}, {{1, 1}, {2, 2}}));
  CHECK(geom::collinear_overlap({{0, 0}, {4, 0}}, {{3, 0}, {1, 0}}));
}

TEST_CASE("render basics") {
  const Image blank = render(Scene(100, 100));
  CHECK(blank.width == 100);
  CHECK(count_dark(blank, 255) == 0);

  Scene one(10, 10);
  one.line({1, 5}, {9, 5}, 1);
  CHECK(count_dark(render(one), 255) > 0);

  CHECK_THROWS_AS(render(Scene(100, 100), 0, 10), InvalidArgument);
}

TEST_CASE("render is bit-stable and survives serialization") {
  SeededRng rng(99);
  for (int i = 0; i < 100; ++i) {
    const Scene s = random_scene(rng);
    const Image a = render(s), b = render(s);
    REQUIRE(a == b);
    CHECK(encode_png(a) == encode_png(b));
    if (i % 10 == 0) {
      const Scene back = scene_from_json(scene_to_json(s));
      CHECK(render(back) == a);
      CHECK(scene_to_json(back) == scene_to_json(s));
    }
  }
}

TEST_CASE("axis-aligned tile copies pixels exactly") {
  Image tile(20, 10, 255);
  for (int x = 0; x < 20; ++x) tile.at(x, x % 10) = 0;
  Scene s(20, 10);
  s.tile(tile, 0, 0, 20, 10);
  CHECK(render(s) == tile);
  CHECK(decode_png(encode_png(tile)) == tile);
}

TEST_CASE("base64 round trip") {
  for (std::size_t n = 0; n < 10; ++n) {
    std::vector<std::uint8_t> bytes;
    for (std::size_t i = 0; i < n; ++i) bytes.push_back(static_cast<std::uint8_t>(37 * i + 250));
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
  }
  CHECK(base64_encode({'M', 'a', 'n'}) == "TWFu");
  CHECK(base64_encode({'M'}) == "TQ==");
}

TEST_CASE("seeded rng is reproducible") {
  SeededRng a(1234), b(1234), c(1235);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
  CHECK(SeededRng::derive(1, "CF1", 0) == SeededRng::derive(1, "CF1", 0));
  CHECK(SeededRng::derive(1, "CF1", 0) != SeededRng::derive(1, "CF2", 0));
  CHECK(SeededRng::derive(1, "CF1", 0) != SeededRng::derive(1, "CF1", 1));

  SeededRng r(5);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) ++hist[static_cast<std::size_t>(r.uniform_int(0, 5))];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  double sum = 0, sq = 0;
  for (int i = 0; i < 20000; ++i) {
    double v = r.normal(2, 3);
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / 20000 - 2) < 0.1);
  CHECK(std::abs(std::sqrt(sq / 20000 - 4) - 3) < 0.1);
}

TEST_CASE("exact polygon helpers") {
  RPolygon sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(exact::signed_area(sq) == Rational(4));
  CHECK(exact::locate({1, 1}, sq) == exact::Location::inside);
  CHECK(exact::locate({2, 1}, sq) == exact::Location::boundary);
  CHECK(exact::locate({3, 1}, sq) == exact::Location::outside);
  auto half = exact::clip_convex(sq, {0, 0}, {2, 2}, 1);
  CHECK(exact::signed_area(exact::ccw(half)) == Rational(2));
  CHECK(exact::is_convex(sq));
  CHECK(exact::is_simple(sq));
  CHECK_FALSE(exact::is_simple(RPolygon{{0, 0}, {2, 2}, {2, 0}, {0, 2}}));
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(to_string(Rational(-4, 6)) == "-2/3");
}
