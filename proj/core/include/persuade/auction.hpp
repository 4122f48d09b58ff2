#pragma once

// Second-price auction utilities with public signaling, the relaxed Jensen
// check, and the vertex scheme for a single neg_min_weighted constraint.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "persuade/types.hpp"

namespace persuade {

inline constexpr std::size_t kDefaultProfileCap = 1'000'000;

struct AuctionEvalOptions {
  std::size_t profile_cap = kDefaultProfileCap;
  /// Required when the profile count exceeds the cap.
  std::optional<std::uint64_t> seed;
  std::size_t samples = 100'000;
};

struct AuctionEstimate {
  double value = 0.0;
  /// Zero for exact evaluation.
  double std_error = 0.0;
  bool exact = true;
  std::size_t profiles = 0;
};

std::size_t profile_count(const AuctionSpec& spec);

/// States in which bidder i's attribute is 1.
std::vector<std::size_t> target_states(const AuctionSpec& spec, std::size_t i, std::size_t k);

AuctionEstimate auction_utility(const AuctionSpec& spec, std::span<const double> q,
                                const AuctionEvalOptions& options = {});

/// Expected welfare or revenue as a weighted sum of max_linear terms.
UtilitySpec to_max_linear(const AuctionSpec& spec, std::size_t k, std::size_t profile_cap = kDefaultProfileCap);

struct JensenReport {
  double max_ratio = 0.0;
  std::size_t trials = 0;
  std::size_t counted = 0;
  double factor = 2.0;
  bool pass = false;
  double worst_lambda = 0.0;
  std::vector<double> worst_q1;
  std::vector<double> worst_q2;
};

/// (lambda u(q1) + (1-lambda) u(q2)) / u(lambda q1 + (1-lambda) q2); 0 if the
/// denominator is below 1e-12.
double jensen_ratio(const UtilitySpec& utility, double lambda, std::span<const double> q1, std::span<const double> q2);

/// Samples lambda ~ U[0,1] and q1, q2 uniform on the simplex.
JensenReport verify_jensen_factor(const UtilitySpec& utility, std::size_t k, std::size_t trials, std::uint64_t seed,
                                  double factor = 2.0);

/// The scheme supported on the vertices of {q : b_w q[w] >= -c for all w}
/// that is Bayes plausible for the prior. The instance must carry exactly one
/// ex-post neg_min_weighted constraint.
SignalingScheme example2_scheme(const ProblemInstance& instance);

}  // namespace persuade
