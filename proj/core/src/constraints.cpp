#include "persuade/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "persuade/errors.hpp"
#include "persuade/geometry.hpp"
#include "persuade/model.hpp"

namespace persuade {

namespace {

struct KlShape {
  std::vector<std::size_t> cell_sizes;
  double scale = 1.0;
  std::vector<double> references;
};

bool is_kl_kind(const ConstraintSpec& spec) {
  return std::holds_alternative<EntropyConstraint>(spec.kind) || std::holds_alternative<GroupedKlConstraint>(spec.kind);
}

KlShape kl_shape(const ConstraintSpec& spec, std::size_t k) {
  KlShape s;
  if (const auto* g = std::get_if<GroupedKlConstraint>(&spec.kind)) {
    for (const auto& cell : g->partition) s.cell_sizes.push_back(cell.size());
    s.scale = g->scale;
    s.references = g->references;
  } else {
    s.cell_sizes.assign(k, 1);
    s.references.assign(k, 1.0);
  }
  return s;
}

// Modulus of continuity of x ln x on [0, 1].
double omega(double t) {
  const double inv_e = std::exp(-1.0);
  if (t <= 0.0) return 0.0;
  return t <= inv_e ? -t * std::log(t) : inv_e;
}

double log_spread(const std::vector<double>& refs) {
  double lo = std::log(refs.front()), hi = lo;
  for (double b : refs) {
    lo = std::min(lo, std::log(b));
    hi = std::max(hi, std::log(b));
  }
  return hi - lo;
}

}  // namespace

double passthrough_lipschitz(const ConstraintSpec& spec) {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          auto [lo, hi] = std::minmax_element(c.coeffs.begin(), c.coeffs.end());
          return *hi - *lo;
        } else if constexpr (std::is_same_v<T, NormDistanceConstraint>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, NegMinWeightedConstraint>) {
          return *std::max_element(c.weights.begin(), c.weights.end());
        } else if constexpr (std::is_same_v<T, BumpConstraint>) {
          return 1.0 / c.radius;
        } else {
          throw InvalidInput("passthrough_lipschitz: entropy and grouped_kl constraints need smoothing");
        }
      },
      spec.kind);
}

double kl_drift_bound(const ConstraintSpec& spec, std::size_t k, double e) {
  if (!is_kl_kind(spec)) throw InvalidInput("kl_drift_bound: not an entropy or grouped_kl constraint");
  KlShape shape = kl_shape(spec, k);
  const double s = 1.0 / (1.0 + e * e);
  const double d = 2.0 * (1.0 - s);
  const double l = static_cast<double>(shape.cell_sizes.size());
  return std::abs(shape.scale) * (l * omega(d / l) + 0.5 * log_spread(shape.references) * d);
}

double SmoothedConstraint::operator()(std::span<const double> q) const {
  if (!smoothed) return eval_constraint(source, q, prior);
  auto p = project_to_contraction(q, contraction);
  return eval_constraint(source, p, prior) - eps / 2.0;
}

SmoothedConstraint smooth_constraint(const ConstraintSpec& spec, double eps, const Posterior& prior) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("smooth_constraint: eps must be positive");
  const std::size_t k = prior.dim();
  spec.validate(k);
  SmoothedConstraint out;
  out.source = spec;
  out.prior = prior;
  out.eps = eps;
  if (!is_kl_kind(spec)) {
    out.lipschitz_constant = passthrough_lipschitz(spec);
    return out;
  }
  KlShape shape = kl_shape(spec, k);
  out.smoothed = true;
  double e = eps;
  while (kl_drift_bound(spec, k, e) > eps / 2.0) {
    e /= 2.0;
    if (e * e < 1e-15) {
      throw NumericFailure("smooth_constraint: eps = " + std::to_string(eps) +
                           " needs a contraction below double precision (e^2 < 1e-15)");
    }
  }
  out.contraction = e;
  out.drift_bound = kl_drift_bound(spec, k, e);
  const double s = 1.0 / (1.0 + e * e);
  const double floor_value = (1.0 - s) / static_cast<double>(k);
  const std::size_t smallest = *std::min_element(shape.cell_sizes.begin(), shape.cell_sizes.end());
  const double q_lo = static_cast<double>(smallest) * floor_value;
  out.lipschitz_constant =
      std::abs(shape.scale) * 0.5 * (std::abs(std::log(q_lo)) + log_spread(shape.references));
  return out;
}

}  // namespace persuade
