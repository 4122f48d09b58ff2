#pragma once

// Hand-rolled random generators for property tests and acceptance runs.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "persuade/auction.hpp"
#include "persuade/types.hpp"

namespace persuade::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return uniform() < p; }
  std::mt19937_64& engine() { return rng_; }

  /// Uniform point on the simplex.
  std::vector<double> simplex_point(std::size_t k) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> q(k);
    double s = 0.0;
    for (double& x : q) s += (x = e(rng_));
    for (double& x : q) x /= s;
    return q;
  }

  /// Simplex point with every coordinate >= floor.
  std::vector<double> interior_point(std::size_t k, double floor) {
    auto q = simplex_point(k);
    const double scale = 1.0 - floor * static_cast<double>(k);
    for (double& x : q) x = floor + scale * x;
    return q;
  }

  /// Random simplex point, sometimes on a face or at a vertex.
  std::vector<double> any_point(std::size_t k) {
    auto q = simplex_point(k);
    const double r = uniform();
    if (r < 0.05) {
      std::fill(q.begin(), q.end(), 0.0);
      q[index(k)] = 1.0;
    } else if (r < 0.15 && k > 2) {
      q[index(k)] = 0.0;
      double s = 0.0;
      for (double x : q) s += x;
      for (double& x : q) x /= s;
    }
    return q;
  }

  std::vector<double> nonneg_vector(std::size_t k, double hi = 1.0) {
    std::vector<double> a(k);
    for (double& x : a) x = uniform(0.0, hi);
    return a;
  }

  MaxLinearUtility max_linear(std::size_t k, std::size_t functionals, std::size_t j = 1) {
    MaxLinearUtility u;
    u.j = j;
    for (std::size_t i = 0; i < functionals; ++i) u.functionals.push_back(nonneg_vector(k));
    return u;
  }

  /// A random grouped_kl constraint over a random partition of k states.
  GroupedKlConstraint grouped_kl(std::size_t k, const std::vector<double>& prior) {
    GroupedKlConstraint g;
    const std::size_t cells = 1 + index(k);
    g.partition.assign(cells, {});
    for (std::size_t w = 0; w < k; ++w) g.partition[w < cells ? w : index(cells)].push_back(w);
    for (const auto& cell : g.partition) {
      double mass = 0.0;
      for (auto w : cell) mass += prior[w];
      g.references.push_back(coin(0.5) ? mass : uniform(0.2, 1.0));
    }
    g.scale = coin(0.8) ? 1.0 : uniform(0.5, 1.5);
    return g;
  }

  AuctionSpec auction(std::size_t n, std::size_t max_types, AuctionObjective objective) {
    AuctionSpec spec;
    spec.objective = objective;
    for (std::size_t i = 0; i < n; ++i) {
      Bidder b;
      const std::size_t t = 1 + index(max_types);
      std::vector<double> w(t);
      double s = 0.0;
      for (double& x : w) s += (x = uniform(0.1, 1.0));
      for (std::size_t j = 0; j < t; ++j) b.types.push_back({w[j] / s, uniform(0.0, 1.0), uniform(0.0, 1.0)});
      double total = 0.0;
      for (const auto& bt : b.types) total += bt.weight;
      b.types.back().weight += 1.0 - total;
      spec.bidders.push_back(std::move(b));
    }
    return spec;
  }

  /// A random Bayes-plausible scheme: size - 1 random points with mass alpha
  /// and one residual point restoring the prior. Retries until the residual
  /// lies in the simplex.
  SignalingScheme scheme(const Posterior& prior, std::size_t size) {
    const std::size_t k = prior.dim();
    if (size <= 1) return SignalingScheme::no_revelation(prior);
    while (true) {
      const double alpha = uniform(0.05, 0.9);
      std::vector<std::vector<double>> pts;
      std::vector<double> w(size - 1);
      double ws = 0.0;
      for (double& x : w) ws += (x = uniform(0.1, 1.0));
      std::vector<double> bary(k, 0.0);
      for (std::size_t i = 0; i + 1 < size; ++i) {
        pts.push_back(any_point(k));
        for (std::size_t c = 0; c < k; ++c) bary[c] += w[i] / ws * pts.back()[c];
      }
      std::vector<double> residual(k);
      bool ok = true;
      double rs = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        residual[c] = (prior[c] - alpha * bary[c]) / (1.0 - alpha);
        ok = ok && residual[c] >= 0.0;
        rs += std::max(0.0, residual[c]);
      }
      if (!ok) continue;
      for (double& x : residual) x = std::max(0.0, x) / rs;
      std::vector<Posterior> support;
      std::vector<double> probs;
      for (std::size_t i = 0; i + 1 < size; ++i) {
        support.emplace_back(pts[i]);
        probs.push_back(alpha * w[i] / ws);
      }
      support.emplace_back(residual);
      probs.push_back(1.0 - alpha);
      return SignalingScheme(std::move(support), std::move(probs));
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace persuade::testing
