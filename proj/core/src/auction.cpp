#include "persuade/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "persuade/errors.hpp"
#include "persuade/model.hpp"

namespace persuade {

namespace {

// Marginal probability that bidder i's attribute is 1.
std::vector<double> inside_marginals(const AuctionSpec& spec, std::span<const double> q) {
  std::vector<double> out(spec.n(), 0.0);
  for (std::size_t i = 0; i < spec.n(); ++i) {
    for (std::size_t w : target_states(spec, i, q.size())) out[i] += q[w];
  }
  return out;
}

double profile_value(const AuctionSpec& spec, const std::vector<double>& inside, const std::vector<std::size_t>& types,
                     std::vector<double>& scratch) {
  const std::size_t n = spec.n();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BidderType& t = spec.bidders[i].types[types[i]];
    scratch[i] = (1.0 - inside[i]) * t.value_outside + inside[i] * t.value_inside;
  }
  if (spec.objective == AuctionObjective::Welfare) return *std::max_element(scratch.begin(), scratch.end());
  if (n == 1) return 0.0;
  std::nth_element(scratch.begin(), scratch.begin() + 1, scratch.end(), std::greater<>());
  return scratch[1];
}

// Advances a mixed-radix counter; false once it wraps.
bool next_profile(const AuctionSpec& spec, std::vector<std::size_t>& types) {
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (++types[i] < spec.bidders[i].types.size()) return true;
    types[i] = 0;
  }
  return false;
}

double profile_weight(const AuctionSpec& spec, const std::vector<std::size_t>& types) {
  double w = 1.0;
  for (std::size_t i = 0; i < types.size(); ++i) w *= spec.bidders[i].types[types[i]].weight;
  return w;
}

}  // namespace

std::size_t profile_count(const AuctionSpec& spec) {
  std::size_t total = 1;
  for (const auto& b : spec.bidders) {
    const std::size_t t = b.types.size();
    if (t != 0 && total > std::numeric_limits<std::size_t>::max() / t) return std::numeric_limits<std::size_t>::max();
    total *= t;
  }
  return total;
}

std::vector<std::size_t> target_states(const AuctionSpec& spec, std::size_t i, std::size_t k) {
  if (i >= spec.n()) throw InvalidInput("target_states: bidder index out of range");
  if (!spec.bidders[i].target.empty()) return spec.bidders[i].target;
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < k; ++w) {
    if ((w >> i) & 1U) out.push_back(w);
  }
  return out;
}

AuctionEstimate auction_utility(const AuctionSpec& spec, std::span<const double> q, const AuctionEvalOptions& options) {
  spec.validate(q.size());
  const std::vector<double> inside = inside_marginals(spec, q);
  std::vector<double> scratch;
  AuctionEstimate est;
  const std::size_t count = profile_count(spec);
  if (count <= options.profile_cap) {
    std::vector<std::size_t> types(spec.n(), 0);
    double total = 0.0;
    do {
      const double w = profile_weight(spec, types);
      if (w > 0.0) total += w * profile_value(spec, inside, types, scratch);
    } while (next_profile(spec, types));
    est.value = total;
    est.profiles = count;
    return est;
  }
  if (!options.seed) {
    throw ResourceLimit("auction_utility: " + std::to_string(count) + " type profiles exceed the cap of " +
                        std::to_string(options.profile_cap) + " and no Monte Carlo seed was given");
  }
  if (options.samples < 2) throw InvalidInput("auction_utility: Monte Carlo needs at least 2 samples");
  std::mt19937_64 rng(*options.seed);
  std::vector<std::discrete_distribution<std::size_t>> draws;
  for (const auto& b : spec.bidders) {
    std::vector<double> w;
    for (const auto& t : b.types) w.push_back(t.weight);
    draws.emplace_back(w.begin(), w.end());
  }
  std::vector<std::size_t> types(spec.n());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < options.samples; ++s) {
    for (std::size_t i = 0; i < spec.n(); ++i) types[i] = draws[i](rng);
    const double v = profile_value(spec, inside, types, scratch);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(options.samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  est.value = mean;
  est.std_error = std::sqrt(var / n);
  est.exact = false;
  est.profiles = options.samples;
  return est;
}

UtilitySpec to_max_linear(const AuctionSpec& spec, std::size_t k, std::size_t profile_cap) {
  spec.validate(k);
  const std::size_t count = profile_count(spec);
  if (count > profile_cap) {
    throw ResourceLimit("to_max_linear: " + std::to_string(count) + " type profiles exceed the cap of " +
                        std::to_string(profile_cap));
  }
  const std::size_t n = spec.n();
  std::vector<std::vector<char>> inside(n, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t w : target_states(spec, i, k)) inside[i][w] = 1;
  }
  WeightedMaxLinearUtility out;
  std::vector<std::size_t> types(n, 0);
  do {
    const double weight = profile_weight(spec, types);
    if (weight <= 0.0) continue;
    MaxLinearUtility term;
    if (spec.objective == AuctionObjective::Revenue && n == 1) {
      term.j = 1;
      term.functionals.assign(1, std::vector<double>(k, 0.0));
    } else {
      term.j = spec.objective == AuctionObjective::Welfare ? 1 : 2;
      for (std::size_t i = 0; i < n; ++i) {
        const BidderType& t = spec.bidders[i].types[types[i]];
        std::vector<double> a(k);
        for (std::size_t w = 0; w < k; ++w) a[w] = inside[i][w] ? t.value_inside : t.value_outside;
        term.functionals.push_back(std::move(a));
      }
    }
    out.terms.push_back({weight, std::move(term)});
  } while (next_profile(spec, types));
  return UtilitySpec{std::move(out)};
}

double jensen_ratio(const UtilitySpec& utility, double lambda, std::span<const double> q1, std::span<const double> q2) {
  if (q1.size() != q2.size()) throw InvalidInput("jensen_ratio: dimension mismatch");
  std::vector<double> mid(q1.size());
  for (std::size_t w = 0; w < mid.size(); ++w) mid[w] = lambda * q1[w] + (1.0 - lambda) * q2[w];
  const double den = eval_utility(utility, mid);
  if (den < 1e-12) return 0.0;
  return (lambda * eval_utility(utility, q1) + (1.0 - lambda) * eval_utility(utility, q2)) / den;
}

JensenReport verify_jensen_factor(const UtilitySpec& utility, std::size_t k, std::size_t trials, std::uint64_t seed,
                                  double factor) {
  if (trials == 0) throw InvalidInput("verify_jensen_factor: trials must be >= 1");
  utility.validate(k);
  UtilitySpec work = utility;
  if (const auto* a = std::get_if<AuctionUtility>(&utility.kind)) work = to_max_linear(a->spec, k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  auto draw = [&] {
    std::vector<double> q(k);
    double s = 0.0;
    for (double& x : q) s += (x = expo(rng));
    for (double& x : q) x /= s;
    return q;
  };
  JensenReport rep;
  rep.factor = factor;
  rep.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const double lambda = unif(rng);
    auto q1 = draw();
    auto q2 = draw();
    std::vector<double> mid(k);
    for (std::size_t w = 0; w < k; ++w) mid[w] = lambda * q1[w] + (1.0 - lambda) * q2[w];
    const double den = eval_utility(work, mid);
    if (den < 1e-12) continue;
    ++rep.counted;
    const double r = (lambda * eval_utility(work, q1) + (1.0 - lambda) * eval_utility(work, q2)) / den;
    if (r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.worst_lambda = lambda;
      rep.worst_q1 = q1;
      rep.worst_q2 = q2;
    }
  }
  rep.pass = rep.max_ratio <= factor + 1e-9;
  return rep;
}

SignalingScheme example2_scheme(const ProblemInstance& instance) {
  instance.validate();
  if (instance.constraints.size() != 1 || instance.constraints[0].mode != ConstraintMode::ExPost) {
    throw InvalidInput("example2_scheme: the instance must have exactly one ex-post constraint");
  }
  const auto* nm = std::get_if<NegMinWeightedConstraint>(&instance.constraints[0].kind);
  if (!nm) throw InvalidInput("example2_scheme: the constraint must be neg_min_weighted");
  const std::size_t k = instance.k;
  const double c = instance.constraints[0].bound;
  std::vector<double> lower(k);
  double total = 0.0;
  for (std::size_t w = 0; w < k; ++w) {
    lower[w] = std::max(0.0, -c / nm->weights[w]);
    total += lower[w];
  }
  if (total > 1.0 + 1e-12) {
    throw InvalidInput("example2_scheme: the restricted simplex is empty (lower bounds sum to " +
                       std::to_string(total) + ")");
  }
  for (std::size_t w = 0; w < k; ++w) {
    if (instance.prior[w] < lower[w] - 1e-12) {
      throw Infeasible("example2_scheme: the prior lies outside the restricted simplex");
    }
  }
  const double free_mass = 1.0 - total;
  if (free_mass <= 1e-12) return SignalingScheme({instance.prior}, {1.0});
  // Vertex i is lower + free_mass * e_i, so the weights follow coordinatewise.
  std::vector<Posterior> support;
  std::vector<double> probs;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = std::max(0.0, (instance.prior[i] - lower[i]) / free_mass);
    if (x <= 0.0) continue;
    std::vector<double> v = lower;
    v[i] += free_mass;
    support.emplace_back(std::move(v));
    probs.push_back(x);
  }
  return SignalingScheme(std::move(support), std::move(probs));
}

}  // namespace persuade
