#pragma once

// Low-dimensional geometry for polytope pieces: k = 2 maps the simplex to
// the segment q[1] in [0,1], k = 3 to the triangle (q[0], q[1]).

#include <array>
#include <span>
#include <vector>

#include "persuade/types.hpp"

namespace persuade::detail {

using Vec2 = std::array<double, 2>;

/// Chart coordinates of a point of the simplex (k = 2 or 3).
Vec2 chart(std::span<const double> q);
/// Inverse of chart.
std::vector<double> unchart(const Vec2& x, std::size_t k);

/// Convex polygon in counter-clockwise order (k = 3), or an interval stored
/// as two points with x[0] = lo/hi (k = 2). Degenerate hulls keep their
/// lower-dimensional shape (1 or 2 points).
struct ChartPolytope {
  std::size_t k = 0;
  std::vector<Vec2> poly;
  bool full_dimensional() const;
};

ChartPolytope chart_polytope(const Piece& piece, std::size_t k);

bool contains(const ChartPolytope& p, const Vec2& x, double tolerance);

/// Clips a convex polygon (or interval when k = 2) against a convex polytope.
std::vector<Vec2> clip(const std::vector<Vec2>& subject, const ChartPolytope& clipper, std::size_t k);

double polygon_area(const std::vector<Vec2>& poly);

bool piece_contains(const Piece& piece, std::span<const double> q, double tolerance);

}  // namespace persuade::detail
