#include "persuade/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "persuade/auction.hpp"
#include "persuade/errors.hpp"
#include "piece_geometry.hpp"

namespace persuade {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double dot(std::span<const double> a, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += a[i] * q[i];
  return s;
}

double max_linear_value(const MaxLinearUtility& u, std::span<const double> q) {
  if (u.j == 1) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : u.functionals) best = std::max(best, dot(a, q));
    return best;
  }
  std::vector<double> v;
  v.reserve(u.functionals.size());
  for (const auto& a : u.functionals) v.push_back(dot(a, q));
  std::nth_element(v.begin(), v.begin() + static_cast<long>(u.j - 1), v.end(), std::greater<>());
  return v[u.j - 1];
}

}  // namespace

PlausibilityCheck check_bayes_plausible(const SignalingScheme& scheme, const Posterior& prior, double tolerance) {
  if (scheme.dim() != prior.dim()) throw InvalidInput("check_bayes_plausible: dimension mismatch");
  PlausibilityCheck out;
  out.deviation = linf_distance(scheme.barycenter(), prior.weights());
  out.plausible = out.deviation <= tolerance;
  return out;
}

double eval_constraint(const ConstraintSpec& spec, std::span<const double> q, const Posterior& prior) {
  if (q.size() != prior.dim()) throw InvalidInput("eval_constraint: dimension mismatch");
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          if (c.coeffs.size() != q.size()) throw InvalidInput("eval_constraint: dimension mismatch");
          return dot(c.coeffs, q);
        } else if constexpr (std::is_same_v<T, NormDistanceConstraint>) {
          switch (c.order) {
            case NormOrder::L1: return l1_distance(q, prior.weights());
            case NormOrder::L2: return l2_distance(q, prior.weights());
            case NormOrder::LInf: return linf_distance(q, prior.weights());
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, EntropyConstraint>) {
          double s = 0.0;
          for (double x : q) s += xlogx(x);
          return s;
        } else if constexpr (std::is_same_v<T, GroupedKlConstraint>) {
          double s = 0.0;
          for (std::size_t j = 0; j < c.partition.size(); ++j) {
            double mass = 0.0;
            for (std::size_t w : c.partition[j]) mass += q[w];
            if (mass > 0.0) s += mass * std::log(mass / c.references[j]);
          }
          return c.scale * s;
        } else if constexpr (std::is_same_v<T, NegMinWeightedConstraint>) {
          if (c.weights.size() != q.size()) throw InvalidInput("eval_constraint: dimension mismatch");
          double m = std::numeric_limits<double>::infinity();
          for (std::size_t w = 0; w < q.size(); ++w) m = std::min(m, c.weights[w] * q[w]);
          return -m;
        } else {
          if (c.center.size() != q.size()) throw InvalidInput("eval_constraint: dimension mismatch");
          return std::max(0.0, 1.0 - l1_distance(q, c.center) / c.radius);
        }
      },
      spec.kind);
}

double eval_utility(const UtilitySpec& spec, std::span<const double> q) {
  return std::visit(
      [&](const auto& u) -> double {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, MaxLinearUtility>) {
          for (const auto& a : u.functionals) {
            if (a.size() != q.size()) throw InvalidInput("eval_utility: dimension mismatch");
          }
          return max_linear_value(u, q);
        } else if constexpr (std::is_same_v<T, WeightedMaxLinearUtility>) {
          double s = 0.0;
          for (const auto& t : u.terms) {
            if (t.weight != 0.0) s += t.weight * max_linear_value(t.term, q);
          }
          return s;
        } else if constexpr (std::is_same_v<T, PiecewiseConstantUtility>) {
          bool covered = false;
          double best = 0.0;
          for (const auto& piece : u.pieces) {
            if (covered && piece.value <= best) continue;
            if (detail::piece_contains(piece, q, 1e-9)) {
              best = covered ? std::max(best, piece.value) : piece.value;
              covered = true;
            }
          }
          if (!covered) throw InvalidInput("eval_utility: point not covered by any piece");
          return best;
        } else {
          return auction_utility(u.spec, q).value;
        }
      },
      spec.kind);
}

double scheme_expectation(const SignalingScheme& scheme, const std::function<double(const Posterior&)>& fn) {
  double s = 0.0;
  for (std::size_t i = 0; i < scheme.size(); ++i) s += scheme.probs()[i] * fn(scheme.support()[i]);
  return s;
}

double VerifyReport::max_violation() const {
  double v = 0.0;
  for (const auto& c : constraints) v = std::max(v, c.violation);
  return v;
}

VerifyReport verify_scheme(const ProblemInstance& instance, const SignalingScheme& scheme, double tolerance) {
  if (scheme.dim() != instance.k) {
    throw InvalidInput("verify_scheme: scheme has dimension " + std::to_string(scheme.dim()) + ", instance k = " +
                       std::to_string(instance.k));
  }
  VerifyReport report;
  report.deviation = check_bayes_plausible(scheme, instance.prior, tolerance).deviation;
  for (const auto& spec : instance.constraints) {
    ConstraintOutcome out;
    out.mode = spec.mode;
    out.bound = spec.bound;
    if (spec.mode == ConstraintMode::ExAnte) {
      out.value = scheme_expectation(scheme, [&](const Posterior& q) { return eval_constraint(spec, q.weights(), instance.prior); });
    } else {
      out.value = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < scheme.size(); ++i) {
        if (scheme.probs()[i] <= 0.0) continue;
        out.value = std::max(out.value, eval_constraint(spec, scheme.support()[i].weights(), instance.prior));
      }
    }
    out.violation = std::max(0.0, out.value - out.bound);
    report.constraints.push_back(out);
  }
  report.utility = scheme_expectation(scheme, [&](const Posterior& q) { return eval_utility(instance.utility, q.weights()); });
  report.valid = report.deviation <= tolerance && report.max_violation() <= tolerance;
  return report;
}

std::vector<double> ex_ante_values(const ProblemInstance& instance, const SignalingScheme& scheme) {
  std::vector<double> out;
  for (const auto& spec : instance.constraints) {
    out.push_back(scheme_expectation(scheme, [&](const Posterior& q) { return eval_constraint(spec, q.weights(), instance.prior); }));
  }
  return out;
}

}  // namespace persuade
