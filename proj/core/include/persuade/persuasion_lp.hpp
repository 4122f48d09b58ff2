#pragma once

// The finite persuasion LP over candidate posteriors.

#include <cstddef>
#include <span>
#include <vector>

#include "persuade/constraints.hpp"
#include "persuade/lp.hpp"
#include "persuade/objectives.hpp"
#include "persuade/types.hpp"

namespace persuade {

/// Candidate posteriors with their objective values and constraint rows.
struct PersuasionData {
  std::size_t k = 0;
  /// Flat n x k coordinates.
  std::vector<double> points;
  std::vector<double> values;
  /// rows[i][v] = value of the i-th ex-ante function at point v.
  std::vector<std::vector<double>> rows;
  std::vector<double> bounds;

  std::size_t size() const { return values.size(); }
  std::span<const double> point(std::size_t v) const { return {points.data() + v * k, k}; }
};

/// maximize sum_v values[v] x_v subject to k-1 barycenter rows, one
/// normalization row and one <= row per ex-ante function.
LinearProgram build_persuasion_lp(const PersuasionData& data, const Posterior& prior);

/// Convenience form: one column per point of the gridded utility, objective
/// = point value, rows from the smoothed constraints with right-hand side
/// bound + relax.
LinearProgram build_persuasion_lp(const GriddedUtility& gridded, std::span<const SmoothedConstraint> constraints,
                                  double relax, const Posterior& prior);

}  // namespace persuade
