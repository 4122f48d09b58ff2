#pragma once

// Piecewise-constant upper approximation of the Sender utility on a
// simplicial grid.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "persuade/geometry.hpp"
#include "persuade/types.hpp"

namespace persuade {

struct ApproxOptions {
  /// The grid denominator is rounded up to a multiple of this value, so that
  /// coarser lattices with denominator grid_multiple nest inside it.
  std::size_t grid_multiple = 1;
  /// 0 means effective_vertex_cap().
  std::size_t vertex_cap = 0;
};

/// A piecewise-constant function over a triangulation of the simplex.
///
/// For Lipschitz utilities the cells are the grid cells. For piecewise
/// constant utilities every grid cell is further split along the piece
/// boundaries (k = 2, 3), and the extra vertices created by the split are
/// appended after the lattice vertices.
struct GriddedUtility {
  SimplexGrid grid;
  std::vector<double> cell_values;
  UtilitySpec source;
  double eps = 0.0;
  double lipschitz_bound = 0.0;
  /// l1-Lipschitz constant of the source (0 for piecewise constant).
  double utility_lipschitz = 0.0;
  /// Certified bound on the value minus u_s over each cell.
  double certified_gap = 0.0;

  // Refinement for piecewise constant sources: sub-cells of grid cell c are
  // [sub_offset[c], sub_offset[c+1]); vertex ids >= grid.num_vertices()
  // index extra_points.
  bool refined = false;
  std::vector<double> extra_points;
  std::vector<std::uint32_t> sub_offset;
  std::vector<std::uint32_t> sub_cells;
  std::vector<double> sub_values;

  /// Lattice vertices followed by refinement vertices.
  std::size_t num_points() const;
  std::span<const double> point(std::size_t i) const;
  /// Max of the values of all (sub-)cells incident to each point.
  std::vector<double> point_values() const;
};

/// Builds u_{eps,M}: 0 <= value - u_s <= eps everywhere.
GriddedUtility build_upper_approx(const UtilitySpec& utility, std::size_t k, double eps, double lipschitz_bound,
                                  const ApproxOptions& options = {});

/// Grid diameter that build_upper_approx will request.
double approx_diameter(const UtilitySpec& utility, double eps, double lipschitz_bound);

/// l1-Lipschitz constant of a max_linear style utility; 0 for piecewise constant.
double utility_lipschitz(const UtilitySpec& utility);

/// Max of the values of the cells whose closure contains q.
double eval_gridded(const GriddedUtility& gu, std::span<const double> q);

}  // namespace persuade
