#include "persuade/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "persuade/errors.hpp"

namespace persuade {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_finite(std::span<const double> v, const std::string& what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw InvalidInput(what + "[" + std::to_string(i) + "] is not finite");
  }
}

void require_dim(std::size_t got, std::size_t k, const std::string& what) {
  if (got != k) {
    throw InvalidInput(what + " has dimension " + std::to_string(got) + ", expected " + std::to_string(k));
  }
}

}  // namespace

Posterior::Posterior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("posterior: empty weight vector");
  require_finite(weights_, "posterior");
  bool clamped = false;
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    double& w = weights_[i];
    if (w < -kInputTolerance) {
      throw InvalidInput("posterior[" + std::to_string(i) + "] = " + num(w) + " is negative");
    }
    if (w < 0.0) {
      w = 0.0;
      clamped = true;
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidInput("posterior entries sum to " + num(sum) + ", expected 1");
  }
  if (clamped) {
    for (double& w : weights_) w /= sum;
  }
}

Posterior Posterior::uniform(std::size_t k) {
  if (k == 0) throw InvalidInput("uniform posterior needs k >= 1");
  return Posterior(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Posterior Posterior::unit(std::size_t k, std::size_t i) {
  if (i >= k) throw InvalidInput("unit posterior index out of range");
  std::vector<double> w(k, 0.0);
  w[i] = 1.0;
  return Posterior(std::move(w));
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

SignalingScheme::SignalingScheme(std::vector<Posterior> support, std::vector<double> probs) {
  if (support.size() != probs.size()) {
    throw InvalidInput("scheme: " + std::to_string(support.size()) + " support points but " +
                       std::to_string(probs.size()) + " probabilities");
  }
  if (support.empty()) throw InvalidInput("scheme: empty support");
  const std::size_t k = support.front().dim();
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    require_dim(support[i].dim(), k, "scheme support point " + std::to_string(i));
    if (!std::isfinite(probs[i])) throw InvalidInput("scheme: probs[" + std::to_string(i) + "] is not finite");
    if (probs[i] < -Posterior::kInputTolerance) {
      throw InvalidInput("scheme: probs[" + std::to_string(i) + "] = " + num(probs[i]) + " is negative");
    }
    probs[i] = std::max(0.0, probs[i]);
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > Posterior::kSumTolerance) {
    throw InvalidInput("scheme: probabilities sum to " + num(sum) + ", expected 1");
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    bool merged = false;
    for (std::size_t j = 0; j < support_.size(); ++j) {
      if (linf_distance(support_[j].weights(), support[i].weights()) <= kMergeDistance) {
        probs_[j] += probs[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      support_.push_back(std::move(support[i]));
      probs_.push_back(probs[i]);
    }
  }
}

SignalingScheme SignalingScheme::full_revelation(const Posterior& prior) {
  std::vector<Posterior> support;
  std::vector<double> probs;
  for (std::size_t i = 0; i < prior.dim(); ++i) {
    if (prior[i] <= 0.0) continue;
    support.push_back(Posterior::unit(prior.dim(), i));
    probs.push_back(prior[i]);
  }
  return SignalingScheme(std::move(support), std::move(probs));
}

SignalingScheme SignalingScheme::no_revelation(const Posterior& prior) { return SignalingScheme({prior}, {1.0}); }

SignalingScheme SignalingScheme::pruned(double threshold) const {
  std::vector<Posterior> support;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (probs_[i] > threshold) {
      support.push_back(support_[i]);
      probs.push_back(probs_[i]);
      total += probs_[i];
    }
  }
  if (support.empty()) throw InvalidInput("scheme: pruning removed every support point");
  for (double& p : probs) p /= total;
  return SignalingScheme(std::move(support), std::move(probs));
}

std::vector<double> SignalingScheme::barycenter() const {
  std::vector<double> b(dim(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t w = 0; w < b.size(); ++w) b[w] += probs_[i] * support_[i][w];
  }
  return b;
}

void ConstraintSpec::validate(std::size_t k) const {
  if (!std::isfinite(bound)) throw InvalidInput("constraint bound is not finite");
  std::visit(
      [k](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          require_dim(c.coeffs.size(), k, "linear constraint coefficients");
          require_finite(c.coeffs, "linear constraint coefficients");
        } else if constexpr (std::is_same_v<T, GroupedKlConstraint>) {
          if (c.partition.empty()) throw InvalidInput("grouped_kl: empty partition");
          if (c.references.size() != c.partition.size()) {
            throw InvalidInput("grouped_kl: " + std::to_string(c.references.size()) + " references for " +
                               std::to_string(c.partition.size()) + " partition cells");
          }
          if (!std::isfinite(c.scale)) throw InvalidInput("grouped_kl: scale is not finite");
          std::vector<bool> seen(k, false);
          for (std::size_t j = 0; j < c.partition.size(); ++j) {
            if (c.partition[j].empty()) throw InvalidInput("grouped_kl: partition cell " + std::to_string(j) + " is empty");
            for (std::size_t w : c.partition[j]) {
              if (w >= k) throw InvalidInput("grouped_kl: state " + std::to_string(w) + " out of range");
              if (seen[w]) throw InvalidInput("grouped_kl: state " + std::to_string(w) + " appears twice");
              seen[w] = true;
            }
            if (!(c.references[j] > 0.0) || !std::isfinite(c.references[j])) {
              throw InvalidInput("grouped_kl: reference " + std::to_string(j) + " must be positive");
            }
          }
          for (std::size_t w = 0; w < k; ++w) {
            if (!seen[w]) throw InvalidInput("grouped_kl: state " + std::to_string(w) + " is not covered");
          }
        } else if constexpr (std::is_same_v<T, NegMinWeightedConstraint>) {
          require_dim(c.weights.size(), k, "neg_min_weighted weights");
          for (double b : c.weights) {
            if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("neg_min_weighted: weights must be positive");
          }
        } else if constexpr (std::is_same_v<T, BumpConstraint>) {
          require_dim(c.center.size(), k, "bump center");
          require_finite(c.center, "bump center");
          if (!(c.radius > 0.0) || !std::isfinite(c.radius)) throw InvalidInput("bump: radius must be positive");
        }
      },
      kind);
}

bool ConstraintSpec::is_convex() const {
  if (const auto* g = std::get_if<GroupedKlConstraint>(&kind)) return g->scale >= 0.0;
  return !std::holds_alternative<BumpConstraint>(kind);
}

std::string ConstraintSpec::kind_name() const {
  static const char* names[] = {"linear", "norm_distance", "entropy", "grouped_kl", "neg_min_weighted", "bump"};
  return names[kind.index()];
}

namespace {

void validate_max_linear(const MaxLinearUtility& u, std::size_t k) {
  if (u.functionals.empty()) throw InvalidInput("max_linear: no functionals");
  if (u.j < 1 || u.j > u.functionals.size()) {
    throw InvalidInput("max_linear: j = " + std::to_string(u.j) + " outside 1.." + std::to_string(u.functionals.size()));
  }
  bool any_nonnegative = false;
  bool all_nonnegative = true;
  for (std::size_t i = 0; i < u.functionals.size(); ++i) {
    const auto& a = u.functionals[i];
    require_dim(a.size(), k, "max_linear functional " + std::to_string(i));
    require_finite(a, "max_linear functional " + std::to_string(i));
    bool nonneg = std::all_of(a.begin(), a.end(), [](double x) { return x >= 0.0; });
    any_nonnegative = any_nonnegative || nonneg;
    all_nonnegative = all_nonnegative && nonneg;
  }
  if (!all_nonnegative && !(u.j == 1 && any_nonnegative)) {
    throw InvalidInput("max_linear: functionals must be nonnegative on the simplex vertices");
  }
}

}  // namespace

void AuctionSpec::validate(std::size_t k) const {
  if (bidders.empty()) throw InvalidInput("auction: no bidders");
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const auto& b = bidders[i];
    const std::string who = "auction bidder " + std::to_string(i);
    if (b.types.empty()) throw InvalidInput(who + ": no types");
    double total = 0.0;
    for (const auto& t : b.types) {
      if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) throw InvalidInput(who + ": type weight must be >= 0");
      if (!(t.value_outside >= 0.0) || !(t.value_inside >= 0.0) || !std::isfinite(t.value_outside) ||
          !std::isfinite(t.value_inside)) {
        throw InvalidInput(who + ": values must be finite and >= 0");
      }
      total += t.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput(who + ": type weights sum to " + num(total));
    if (b.target.empty()) {
      if (bidders.size() >= 63 || (std::size_t{1} << bidders.size()) != k) {
        throw InvalidInput(who + ": hypercube convention needs k = 2^n = " +
                           std::to_string(std::size_t{1} << std::min<std::size_t>(bidders.size(), 62)) +
                           ", got k = " + std::to_string(k));
      }
    } else {
      std::set<std::size_t> seen;
      for (std::size_t w : b.target) {
        if (w >= k) throw InvalidInput(who + ": target state " + std::to_string(w) + " out of range");
        if (!seen.insert(w).second) throw InvalidInput(who + ": target state " + std::to_string(w) + " repeated");
      }
    }
  }
}

void UtilitySpec::validate(std::size_t k) const {
  std::visit(
      [k](const auto& u) {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, MaxLinearUtility>) {
          validate_max_linear(u, k);
        } else if constexpr (std::is_same_v<T, WeightedMaxLinearUtility>) {
          if (u.terms.empty()) throw InvalidInput("weighted_max_linear: no terms");
          for (const auto& t : u.terms) {
            if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
              throw InvalidInput("weighted_max_linear: weights must be finite and >= 0");
            }
            validate_max_linear(t.term, k);
          }
        } else if constexpr (std::is_same_v<T, PiecewiseConstantUtility>) {
          if (u.pieces.empty()) throw InvalidInput("piecewise_constant: no pieces");
          for (std::size_t p = 0; p < u.pieces.size(); ++p) {
            const auto& piece = u.pieces[p];
            const std::string who = "piecewise_constant piece " + std::to_string(p);
            if (piece.vertices.empty()) throw InvalidInput(who + ": no vertices");
            if (!(piece.value >= 0.0) || !std::isfinite(piece.value)) throw InvalidInput(who + ": value must be >= 0");
            for (const auto& v : piece.vertices) {
              require_dim(v.size(), k, who + " vertex");
              (void)Posterior(v);
            }
          }
        } else {
          u.spec.validate(k);
        }
      },
      kind);
}

std::string UtilitySpec::kind_name() const {
  switch (kind.index()) {
    case 0: return "max_linear";
    case 1: return "weighted_max_linear";
    case 2: return "piecewise_constant";
    default:
      return std::get<AuctionUtility>(kind).spec.objective == AuctionObjective::Welfare ? "auction_welfare"
                                                                                       : "auction_revenue";
  }
}

void ProblemInstance::validate() const {
  if (k < 2) throw InvalidInput("instance: k must be >= 2, got " + std::to_string(k));
  require_dim(prior.dim(), k, "prior");
  utility.validate(k);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    try {
      constraints[i].validate(k);
    } catch (const InvalidInput& e) {
      throw InvalidInput("constraint " + std::to_string(i) + ": " + e.what());
    }
  }
}

std::size_t ProblemInstance::count(ConstraintMode mode) const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(), [mode](const ConstraintSpec& c) { return c.mode == mode; }));
}

}  // namespace persuade
