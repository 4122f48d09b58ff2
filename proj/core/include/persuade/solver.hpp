#pragma once

// End-to-end solvers: the grid-LP bi-criteria and single-criteria schemes,
// the ex-ante to ex-post pooling conversion, and a brute-force oracle.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "persuade/geometry.hpp"
#include "persuade/lp.hpp"
#include "persuade/model.hpp"
#include "persuade/types.hpp"

namespace persuade {

enum class SolveMode { BiCriteria, SingleCriteria, ExPostRestricted, Oracle };

std::string to_string(SolveMode mode);

struct SolveOptions {
  /// Forwarded to build_upper_approx.
  std::size_t grid_multiple = 1;
  std::size_t vertex_cap = 0;
  SimplexOptions lp;
  /// Support points with LP mass at or below this are dropped.
  double prune_threshold = 1e-12;
};

struct SolveReport {
  SignalingScheme scheme;
  SolveMode mode = SolveMode::BiCriteria;
  double eps = 0.0;
  /// Expected true utility of the returned scheme.
  double value = 0.0;
  /// Optimal objective of the LP (expected upper-approximation value).
  double lp_value = 0.0;
  std::vector<ConstraintOutcome> constraints;
  double max_violation = 0.0;
  double plausibility_deviation = 0.0;
  std::size_t grid_denominator = 0;
  std::size_t vertex_count = 0;
  std::size_t candidate_count = 0;
  std::size_t lp_rows = 0;
  std::size_t lp_iterations = 0;
  double lipschitz_bound = 0.0;
};

/// Grid LP with constraints smoothed at eps/2 and relaxed by eps/2. Ex-post
/// constraints restrict the candidate vertices. Throws Infeasible if the LP
/// has no solution and ResourceLimit if the grid would exceed the cap.
SolveReport bi_criteria_solve(const ProblemInstance& instance, double eps, const SolveOptions& options = {});

/// Bi-criteria at eps/2 with every ex-ante bound tightened by eps/2.
/// Requires eps <= 2 * slater_margin.
SolveReport single_criteria_solve(const ProblemInstance& instance, double eps, double slater_margin,
                                  const SolveOptions& options = {});

struct PoolingStep {
  std::size_t constraint = 0;
  double lambda = 0.0;
  double f_source = 0.0;
  double f_target = 0.0;
  double f_pooled = 0.0;
  /// Barycenter deviation from the prior after this step.
  double deviation = 0.0;
  /// Expectation of every constraint function after this step.
  std::vector<double> expectations;
  std::size_t support_size = 0;
};

struct PoolingTrace {
  /// Expectations before the first step.
  std::vector<double> initial_expectations;
  std::vector<PoolingStep> steps;
  /// Support size at the start of each constraint's run.
  std::vector<std::size_t> support_at_start;
  std::vector<std::size_t> steps_per_constraint;
};

/// Chooses (source, target) among the current support for constraint j.
/// S holds indices with f < c and T indices with f > c.
using PairSelector = std::function<std::pair<std::size_t, std::size_t>(
    std::size_t j, const std::vector<std::vector<double>>& points, const std::vector<double>& f_values,
    const std::vector<std::size_t>& S, const std::vector<std::size_t>& T)>;

struct PoolingOptions {
  /// Empty: target with largest f, source with smallest f, lowest index on ties.
  PairSelector selector;
  PoolingTrace* trace = nullptr;
  /// S/T membership margin around the bound.
  double margin = 1e-9;
};

/// Runs the pooling procedure once per constraint, in order. Throws
/// InvalidInput for non-convex kinds, Infeasible if the input violates an
/// ex-ante bound, NumericFailure if the boundary search fails.
SignalingScheme ex_ante_to_ex_post(const SignalingScheme& scheme, std::span<const ConstraintSpec> constraints,
                                   const Posterior& prior, const PoolingOptions& options = {});

/// Exact-on-grid solve: LP over the given grid vertices with the true utility
/// values and unrelaxed ex-ante bounds; ex-post constraints filter vertices.
SolveReport grid_solve(const ProblemInstance& instance, const SimplexGrid& grid, const SolveOptions& options = {});

struct OracleOptions {
  std::size_t max_points = 25;
  /// Solve the candidate systems in exact rational arithmetic.
  bool exact = false;
};

/// Exhaustive search over basic solutions supported on the given candidate
/// points (after ex-post filtering); uses the true utility and unrelaxed
/// ex-ante bounds.
SolveReport oracle_solve(const ProblemInstance& instance, std::span<const std::vector<double>> points,
                         const OracleOptions& options = {});

SolveReport oracle_solve(const ProblemInstance& instance, const SimplexGrid& grid, const OracleOptions& options = {});

}  // namespace persuade
