#include "visfactor/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "visfactor/error.hpp"

namespace visfactor::geom {

std::vector<LatticeEdge> admissible_edges(int rows, int cols) {
  if (rows < 2 || cols < 2) throw InvalidArgument("lattice dimensions must be at least 2x2");
  std::vector<LatticeEdge> edges;
  edges.reserve(admissible_edge_count(rows, cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(GridPoint{r, c}, GridPoint{r, c + 1});
      if (r + 1 < rows) edges.emplace_back(GridPoint{r, c}, GridPoint{r + 1, c});
      if (r + 1 < rows && c + 1 < cols) edges.emplace_back(GridPoint{r, c}, GridPoint{r + 1, c + 1});
      if (r + 1 < rows && c >= 1) edges.emplace_back(GridPoint{r, c}, GridPoint{r + 1, c - 1});
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

Lattice::Lattice(int rows, int cols) : rows_(rows), cols_(cols), admissible_(admissible_edges(rows, cols)) {}

std::vector<LatticeEdge> Lattice::perimeter() const {
  std::vector<LatticeEdge> out;
  for (int c = 0; c + 1 < cols_; ++c) {
    out.emplace_back(GridPoint{0, c}, GridPoint{0, c + 1});
    out.emplace_back(GridPoint{rows_ - 1, c}, GridPoint{rows_ - 1, c + 1});
  }
  for (int r = 0; r + 1 < rows_; ++r) {
    out.emplace_back(GridPoint{r, 0}, GridPoint{r + 1, 0});
    out.emplace_back(GridPoint{r, cols_ - 1}, GridPoint{r + 1, cols_ - 1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }
bool near(Point a, Point b, double tol) noexcept { return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol; }

bool FoldAxis::valid() const {
  switch (kind) {
    case AxisKind::horizontal:
    case AxisKind::vertical:
      return offset > 0 && offset < 1;
    case AxisKind::diagonal:
      if (slope_sign == 1) return offset > -1 && offset < 1;
      if (slope_sign == -1) return offset > 0 && offset < 2;
      return false;
  }
  return false;
}

Point reflect_across(Point p, const FoldAxis& axis) {
  const double c = to_double(axis.offset);
  switch (axis.kind) {
    case AxisKind::horizontal:
      return {p.x, 2 * c - p.y};
    case AxisKind::vertical:
      return {2 * c - p.x, p.y};
    case AxisKind::diagonal:
      if (axis.slope_sign == 1) return {p.y - c, p.x + c};
      return {c - p.y, c - p.x};
  }
  return p;
}

RPoint reflect_across(const RPoint& p, const FoldAxis& axis) {
  const Rational& c = axis.offset;
  switch (axis.kind) {
    case AxisKind::horizontal:
      return {p.x, c * 2 - p.y};
    case AxisKind::vertical:
      return {c * 2 - p.x, p.y};
    case AxisKind::diagonal:
      if (axis.slope_sign == 1) return {p.y - c, p.x + c};
      return {c - p.y, c - p.x};
  }
  return p;
}

Rational axis_side(const RPoint& p, const FoldAxis& axis) {
  switch (axis.kind) {
    case AxisKind::horizontal:
      return p.y - axis.offset;
    case AxisKind::vertical:
      return p.x - axis.offset;
    case AxisKind::diagonal:
      return p.y - p.x * axis.slope_sign - axis.offset;
  }
  return Rational{0};
}

double axis_side(Point p, const FoldAxis& axis) {
  const double c = to_double(axis.offset);
  switch (axis.kind) {
    case AxisKind::horizontal:
      return p.y - c;
    case AxisKind::vertical:
      return p.x - c;
    case AxisKind::diagonal:
      return p.y - axis.slope_sign * p.x - c;
  }
  return 0;
}

bool collinear_overlap(const Segment& s1, const Segment& s2) {
  const Point d1 = s1.b - s1.a;
  const Point d2 = s2.b - s2.a;
  const double len1 = std::hypot(d1.x, d1.y);
  const double len2 = std::hypot(d2.x, d2.y);
  if (len1 <= kEps || len2 <= kEps) return false;
  if (std::abs(cross(d1, d2)) > kEps * len1 * len2) return false;
  if (std::abs(cross(d1, s2.a - s1.a)) > kEps * len1 * std::max(1.0, distance(s2.a, s1.a))) return false;
  const double u0 = dot(s2.a - s1.a, d1) / len1;
  const double u1 = dot(s2.b - s1.a, d1) / len1;
  const double lo = std::max(0.0, std::min(u0, u1));
  const double hi = std::min(len1, std::max(u0, u1));
  return hi - lo > kEps;
}

namespace {

int orientation(Point a, Point b, Point c) {
  double v = cross(b - a, c - a);
  if (v > kEps) return 1;
  if (v < -kEps) return -1;
  return 0;
}

bool within_box(Point p, Point a, Point b) {
  return std::min(a.x, b.x) - kEps <= p.x && p.x <= std::max(a.x, b.x) + kEps &&
         std::min(a.y, b.y) - kEps <= p.y && p.y <= std::max(a.y, b.y) + kEps;
}

}  // namespace

bool segments_intersect(const Segment& s1, const Segment& s2) {
  int o1 = orientation(s1.a, s1.b, s2.a);
  int o2 = orientation(s1.a, s1.b, s2.b);
  int o3 = orientation(s2.a, s2.b, s1.a);
  int o4 = orientation(s2.a, s2.b, s1.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && within_box(s2.a, s1.a, s1.b)) return true;
  if (o2 == 0 && within_box(s2.b, s1.a, s1.b)) return true;
  if (o3 == 0 && within_box(s1.a, s2.a, s2.b)) return true;
  if (o4 == 0 && within_box(s1.b, s2.a, s2.b)) return true;
  return false;
}

double signed_area(std::span<const Point> poly) {
  double twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  return twice / 2;
}

Point centroid(std::span<const Point> poly) {
  const double a = signed_area(poly);
  double cx = 0, cy = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point p = poly[i];
    Point q = poly[(i + 1) % poly.size()];
    double c = cross(p, q);
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (6 * a), cy / (6 * a)};
}

bool is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3 || std::abs(signed_area(poly)) <= kEps) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Segment e1{poly[i], poly[(i + 1) % n]};
    for (std::size_t j = i + 1; j < n; ++j) {
      Segment e2{poly[j], poly[(j + 1) % n]};
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        if (collinear_overlap(e1, e2)) return false;
        continue;
      }
      if (segments_intersect(e1, e2)) return false;
    }
  }
  return true;
}

}  // namespace visfactor::geom
