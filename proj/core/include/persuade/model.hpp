#pragma once

// Evaluation of constraint and utility functions, expectations over schemes,
// and scheme verification against a problem instance.

#include <functional>
#include <span>
#include <vector>

#include "persuade/types.hpp"

namespace persuade {

struct PlausibilityCheck {
  bool plausible = false;
  /// l-infinity distance between the scheme's barycenter and the prior.
  double deviation = 0.0;
};

PlausibilityCheck check_bayes_plausible(const SignalingScheme& scheme, const Posterior& prior,
                                        double tolerance = 1e-9);

/// f(q) for the given constraint. The prior is used by norm_distance only.
double eval_constraint(const ConstraintSpec& spec, std::span<const double> q, const Posterior& prior);

/// u_s(q). Auction kinds are evaluated exactly (see auction.hpp).
double eval_utility(const UtilitySpec& spec, std::span<const double> q);

double scheme_expectation(const SignalingScheme& scheme,
                          const std::function<double(const Posterior&)>& fn);

struct ConstraintOutcome {
  ConstraintMode mode = ConstraintMode::ExAnte;
  double bound = 0.0;
  /// Expectation (ex ante) or maximum over the support (ex post).
  double value = 0.0;
  double violation = 0.0;
};

struct VerifyReport {
  double deviation = 0.0;
  std::vector<ConstraintOutcome> constraints;
  double utility = 0.0;
  bool valid = false;

  double max_violation() const;
};

/// Ex-post values are taken over support points with positive probability.
VerifyReport verify_scheme(const ProblemInstance& instance, const SignalingScheme& scheme,
                           double tolerance = 1e-9);

/// Evaluates the instance constraints on the scheme, ignoring the stored mode
/// and treating every constraint as ex ante.
std::vector<double> ex_ante_values(const ProblemInstance& instance, const SignalingScheme& scheme);

}  // namespace persuade
