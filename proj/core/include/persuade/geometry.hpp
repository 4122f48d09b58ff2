#pragma once

// Kuhn (Freudenthal) triangulation of the probability simplex on the lattice
// {0, 1/N, ..., 1}^k, and projection onto the contracted simplex.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace persuade {

/// Default limit on the number of grid vertices; PERSUADE_GRID_CAP overrides.
inline constexpr std::size_t kDefaultVertexCap = 5'000'000;

/// Cap in effect: the explicit value if nonzero, else the environment
/// variable, else kDefaultVertexCap.
std::size_t effective_vertex_cap(std::size_t requested = 0);

/// Number of lattice points C(N+k-1, k-1); saturates at SIZE_MAX.
std::size_t lattice_point_count(std::size_t k, std::size_t N);

class SimplexGrid {
 public:
  SimplexGrid() = default;

  std::size_t dim() const { return k_; }
  std::size_t denominator() const { return N_; }
  std::size_t num_vertices() const { return coords_.size() / (k_ ? k_ : 1); }
  std::size_t num_cells() const { return cells_.size() / (k_ ? k_ : 1); }

  std::span<const double> vertex(std::size_t i) const { return {coords_.data() + i * k_, k_}; }
  std::span<const std::uint32_t> cell(std::size_t c) const { return {cells_.data() + c * k_, k_}; }

  /// Integer lattice coordinates n with sum N, vertex = n / N.
  std::vector<std::size_t> lattice(std::size_t i) const;
  /// Index of the vertex with lattice coordinates n (sum must be N).
  std::size_t vertex_index(std::span<const std::size_t> n) const;

  /// Largest l1 diameter over all cells, measured on the built cells.
  double measured_max_diameter() const { return max_diameter_; }
  /// The diameter bound that was requested when building.
  double requested_diameter() const { return requested_diameter_; }

  /// Cells whose closure contains q (barycentric membership within tol).
  std::vector<std::size_t> locate(std::span<const double> q, double tolerance = 1e-9) const;

  /// Barycentric coordinates of q with respect to cell c.
  std::vector<double> barycentric(std::size_t c, std::span<const double> q) const;

  /// (k-1)-volume of cell c in the chart (q_0, ..., q_{k-2}).
  double cell_volume(std::size_t c) const;

  static SimplexGrid build(std::size_t k, std::size_t N, double requested_diameter, std::size_t vertex_cap);

 private:
  std::size_t k_ = 0;
  std::size_t N_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint32_t> cells_;
  // Cells are grouped by base vertex: cells of base b are
  // [cell_offset_[b], cell_offset_[b+1]), each tagged with its permutation id.
  std::vector<std::uint32_t> cell_offset_;
  std::vector<std::uint16_t> cell_perm_;
  std::vector<std::vector<std::uint8_t>> perms_;
  double max_diameter_ = 0.0;
  double requested_diameter_ = 0.0;
  // binom_[n * (k_ + 1) + r] = C(n, r).
  std::vector<std::uint64_t> binom_;

  std::uint64_t binom(std::size_t n, std::size_t r) const { return binom_[n * (k_ + 1) + r]; }
  /// Rank of a nondecreasing cumulative sequence y_1..y_{k-1} in [0, N].
  std::size_t rank_cumulative(std::span<const std::size_t> y) const;
};

/// Largest l1 cell diameter of the Kuhn triangulation in lattice units
/// (2 for k <= 3, larger in higher dimension).
std::size_t kuhn_diameter_units(std::size_t k);

/// Smallest denominator whose cells have l1 diameter <= delta.
std::size_t denominator_for(std::size_t k, double max_diameter);

/// Grid with denominator ceil(2/delta), increased if a measured cell
/// diameter still exceeds delta.
SimplexGrid build_grid(std::size_t k, double max_diameter, std::size_t vertex_cap = 0);

SimplexGrid build_grid_with_denominator(std::size_t k, std::size_t N, std::size_t vertex_cap = 0);

/// Euclidean projection of q onto the homothetic image of the simplex about
/// its center with ratio 1/(1+eps^2).
std::vector<double> project_to_contraction(std::span<const double> q, double eps);

}  // namespace persuade
