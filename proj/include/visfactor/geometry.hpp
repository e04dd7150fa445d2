#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "visfactor/rational.hpp"

namespace visfactor::geom {

/// Tolerance for every real-coordinate comparison.
inline constexpr double kEps = 1e-9;

/// Lattice node, row counted top-to-bottom and column left-to-right (0-based).
struct GridPoint {
  int row = 0;
  int col = 0;

  auto operator<=>(const GridPoint&) const = default;
};

/// Undirected unit edge between adjacent lattice nodes; a < b always.
struct LatticeEdge {
  GridPoint a;
  GridPoint b;

  LatticeEdge() = default;
  LatticeEdge(GridPoint p, GridPoint q) : a(p < q ? p : q), b(p < q ? q : p) {}

  LatticeEdge translated(int drow, int dcol) const {
    return {{a.row + drow, a.col + dcol}, {b.row + drow, b.col + dcol}};
  }
  auto operator<=>(const LatticeEdge&) const = default;
};

/// m x n node lattice with horizontal, vertical and both diagonal unit edges.
class Lattice {
 public:
  Lattice(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(rows_) * cols_; }
  const std::vector<LatticeEdge>& admissible() const noexcept { return admissible_; }
  bool contains(GridPoint p) const noexcept { return p.row >= 0 && p.row < rows_ && p.col >= 0 && p.col < cols_; }
  std::size_t index(GridPoint p) const noexcept { return static_cast<std::size_t>(p.row) * cols_ + p.col; }
  /// Edges on the bounding rectangle.
  std::vector<LatticeEdge> perimeter() const;

 private:
  int rows_;
  int cols_;
  std::vector<LatticeEdge> admissible_;
};

/// All admissible edges of an m x n lattice, sorted.
/// Throws InvalidArgument when either dimension is below 2.
std::vector<LatticeEdge> admissible_edges(int rows, int cols);

inline std::size_t admissible_edge_count(int rows, int cols) {
  return static_cast<std::size_t>(rows * (cols - 1) + cols * (rows - 1) + 2 * (rows - 1) * (cols - 1));
}

struct Point {
  double x = 0;
  double y = 0;

  friend Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
  friend Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point, Point) = default;
};

double cross(Point a, Point b) noexcept;
double dot(Point a, Point b) noexcept;
double distance(Point a, Point b) noexcept;
bool near(Point a, Point b, double tol = kEps) noexcept;

struct Segment {
  Point a;
  Point b;
};

enum class AxisKind { horizontal, vertical, diagonal };

/// Fold line on the unit sheet: y = c, x = c, or y = slope_sign * x + c.
/// The offset is exact so fold chains stay representable.
struct FoldAxis {
  AxisKind kind = AxisKind::vertical;
  Rational offset{0};
  int slope_sign = 1;

  static FoldAxis horizontal(Rational c) { return {AxisKind::horizontal, c, 1}; }
  static FoldAxis vertical(Rational c) { return {AxisKind::vertical, c, 1}; }
  static FoldAxis diagonal(int sign, Rational c) { return {AxisKind::diagonal, c, sign}; }

  /// True when the line crosses the open unit square.
  bool valid() const;
  friend bool operator==(const FoldAxis&, const FoldAxis&) = default;
};

Point reflect_across(Point p, const FoldAxis& axis);
RPoint reflect_across(const RPoint& p, const FoldAxis& axis);

/// Signed side of p relative to the axis: positive above / right of it.
Rational axis_side(const RPoint& p, const FoldAxis& axis);
double axis_side(Point p, const FoldAxis& axis);

/// True iff the segments lie on one supporting line and their closed extents
/// share more than a single point.
bool collinear_overlap(const Segment& s1, const Segment& s2);

/// True iff the two closed segments share at least one point.
bool segments_intersect(const Segment& s1, const Segment& s2);

/// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(std::span<const Point> poly);
Point centroid(std::span<const Point> poly);
/// No two non-adjacent edges touch and no adjacent edges fold back.
bool is_simple(std::span<const Point> poly);

}  // namespace visfactor::geom
