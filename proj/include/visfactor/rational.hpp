#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace visfactor {

using Rational = boost::rational<std::int64_t>;

/// Mixed Rational == int comparisons recurse forever under C++20 operator
/// rewriting with this Boost version; compare through these instead.
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
std::string to_string(const Rational& r);
/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

/// Exact point; used wherever fold chains or cut dissections must not drift.
struct RPoint {
  Rational x{0};
  Rational y{0};

  friend RPoint operator+(const RPoint& p, const RPoint& q) { return {p.x + q.x, p.y + q.y}; }
  friend RPoint operator-(const RPoint& p, const RPoint& q) { return {p.x - q.x, p.y - q.y}; }
  friend bool operator==(const RPoint&, const RPoint&) = default;
  friend bool operator<(const RPoint& p, const RPoint& q) { return p.x < q.x || (p.x == q.x && p.y < q.y); }
};

using RPolygon = std::vector<RPoint>;

struct RSegment {
  RPoint a;
  RPoint b;
  friend bool operator==(const RSegment&, const RSegment&) = default;
};

namespace exact {

Rational cross(const RPoint& a, const RPoint& b);
Rational dot(const RPoint& a, const RPoint& b);
/// Cross product of (b - a) and (c - a).
Rational orient(const RPoint& a, const RPoint& b, const RPoint& c);
int sign(const Rational& r);

Rational signed_area(const RPolygon& poly);
RPoint centroid(const RPolygon& poly);
/// Makes the vertex order counter-clockwise.
RPolygon ccw(RPolygon poly);
/// Drops repeated and collinear vertices.
RPolygon simplify(const RPolygon& poly);

bool on_segment(const RPoint& p, const RPoint& a, const RPoint& b);
/// Closed-segment intersection test.
bool segments_intersect(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d);
/// Intersection point of two non-parallel lines through (a,b) and (c,d).
std::optional<RPoint> line_intersection(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d);

enum class Location { outside, boundary, inside };
/// Exact point-in-polygon for any simple polygon.
Location locate(const RPoint& p, const RPolygon& poly);

/// Part of a convex polygon where side(p) * keep_sign >= 0 for the line
/// through a and b (left side positive). May return an empty polygon.
RPolygon clip_convex(const RPolygon& poly, const RPoint& a, const RPoint& b, int keep_sign);

bool is_simple(const RPolygon& poly);
bool is_convex(const RPolygon& poly);

}  // namespace exact
}  // namespace visfactor
