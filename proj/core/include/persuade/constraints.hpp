#pragma once

// Lipschitz smoothing of constraint functions.

#include <cstddef>
#include <span>

#include "persuade/types.hpp"

namespace persuade {

/// g with 0 <= f - g <= eps and an l1-Lipschitz certificate.
///
/// Entropy and grouped-KL constraints become g(q) = f(proj(q)) - eps/2, where
/// proj is the projection onto the contracted simplex with parameter
/// contraction; every other kind passes through unchanged.
struct SmoothedConstraint {
  ConstraintSpec source;
  Posterior prior;
  double eps = 0.0;
  double lipschitz_constant = 0.0;
  bool smoothed = false;
  /// Contraction parameter (0 when passing through).
  double contraction = 0.0;
  /// Certified bound on |f(q) - f(proj(q))|.
  double drift_bound = 0.0;

  double operator()(std::span<const double> q) const;
};

SmoothedConstraint smooth_constraint(const ConstraintSpec& spec, double eps, const Posterior& prior);

/// l1-Lipschitz constant of an unsmoothed kind; throws for entropy/grouped_kl.
double passthrough_lipschitz(const ConstraintSpec& spec);

/// Certified |f(q) - f(proj(q))| for a grouped_kl/entropy constraint at
/// contraction parameter e.
double kl_drift_bound(const ConstraintSpec& spec, std::size_t k, double e);

}  // namespace persuade
