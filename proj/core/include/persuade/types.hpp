#pragma once

// Domain types: posteriors, signaling schemes, constraint and utility
// descriptors, and problem instances. All are immutable after construction.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace persuade {

/// A point of the probability simplex over k states.
///
/// Construction validates the input: entries must be >= -1e-12 and sum to 1
/// within 1e-9. Slightly negative entries are clamped to 0 and the vector is
/// renormalized, so stored weights are exactly nonnegative.
class Posterior {
 public:
  static constexpr double kInputTolerance = 1e-12;
  static constexpr double kSumTolerance = 1e-9;

  Posterior() = default;
  explicit Posterior(std::vector<double> weights);

  /// Uniform distribution over k states.
  static Posterior uniform(std::size_t k);
  /// Point mass on state i.
  static Posterior unit(std::size_t k, std::size_t i);

  std::size_t dim() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  const std::vector<double>& vec() const { return weights_; }

  friend bool operator==(const Posterior&, const Posterior&) = default;

 private:
  std::vector<double> weights_;
};

double linf_distance(std::span<const double> a, std::span<const double> b);
double l1_distance(std::span<const double> a, std::span<const double> b);
double l2_distance(std::span<const double> a, std::span<const double> b);

/// A finitely supported distribution over posteriors.
///
/// Support points closer than 1e-12 in the max norm are merged (weights
/// summed). Probabilities must be nonnegative and sum to 1 within 1e-9.
class SignalingScheme {
 public:
  static constexpr double kMergeDistance = 1e-12;

  SignalingScheme() = default;
  SignalingScheme(std::vector<Posterior> support, std::vector<double> probs);

  /// Full revelation: point masses on unit vectors weighted by the prior.
  static SignalingScheme full_revelation(const Posterior& prior);
  /// No revelation: the prior itself with probability 1.
  static SignalingScheme no_revelation(const Posterior& prior);

  std::size_t size() const { return support_.size(); }
  std::size_t dim() const { return support_.empty() ? 0 : support_.front().dim(); }
  const std::vector<Posterior>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Drops points with probability <= threshold and renormalizes.
  SignalingScheme pruned(double threshold) const;

  /// Barycenter sum_i probs_i * support_i.
  std::vector<double> barycenter() const;

 private:
  std::vector<Posterior> support_;
  std::vector<double> probs_;
};

enum class ConstraintMode { ExAnte, ExPost };

enum class NormOrder { L1, L2, LInf };

/// f(q) = sum_w coeffs[w] * q[w].
struct LinearConstraint {
  std::vector<double> coeffs;
};

/// f(q) = ||q - prior|| in the given order.
struct NormDistanceConstraint {
  NormOrder order = NormOrder::L1;
};

/// f(q) = sum_w q[w] ln q[w] (negative Shannon entropy), with 0 ln 0 = 0.
struct EntropyConstraint {};

/// f(q) = scale * sum_j Q_j ln(Q_j / references[j]), Q_j = mass of cell j.
struct GroupedKlConstraint {
  std::vector<std::vector<std::size_t>> partition;
  double scale = 1.0;
  std::vector<double> references;
};

/// f(q) = -min_w weights[w] * q[w].
struct NegMinWeightedConstraint {
  std::vector<double> weights;
};

/// f(q) = max(0, 1 - ||q - center||_1 / radius): a continuous bump that is 1
/// at the center and vanishes outside the l1 ball. Not convex.
struct BumpConstraint {
  std::vector<double> center;
  double radius = 1.0;
};

using ConstraintKind = std::variant<LinearConstraint, NormDistanceConstraint, EntropyConstraint,
                                    GroupedKlConstraint, NegMinWeightedConstraint, BumpConstraint>;

struct ConstraintSpec {
  ConstraintKind kind;
  double bound = 0.0;
  ConstraintMode mode = ConstraintMode::ExAnte;

  /// Throws InvalidInput if the descriptor is malformed for dimension k.
  void validate(std::size_t k) const;
  /// True for kinds whose f is convex on the simplex.
  bool is_convex() const;
  std::string kind_name() const;
};

/// u(q) = j-th largest of { a . q : a in functionals } (j is 1-based).
///
/// The usual class has every functional nonnegative on the simplex vertices.
/// Signed functionals are accepted for j = 1 provided at least one functional
/// is nonnegative on every vertex, which keeps u >= 0 on the whole simplex.
struct MaxLinearUtility {
  std::size_t j = 1;
  std::vector<std::vector<double>> functionals;
};

/// u(q) = sum_t weight_t * term_t(q) with nonnegative weights.
struct WeightedMaxLinearUtility {
  struct Term {
    double weight = 1.0;
    MaxLinearUtility term;
  };
  std::vector<Term> terms;
};

/// A convex polytope given by its vertices, carrying a constant value.
struct Piece {
  std::vector<std::vector<double>> vertices;
  double value = 0.0;
};

/// Piecewise constant utility; evaluation takes the upper envelope over all
/// pieces whose closure contains the query point.
struct PiecewiseConstantUtility {
  std::vector<Piece> pieces;
};

enum class AuctionObjective { Welfare, Revenue };

/// One bidder type: probability weight and the values v(0, t), v(1, t).
struct BidderType {
  double weight = 1.0;
  double value_outside = 0.0;
  double value_inside = 0.0;
};

struct Bidder {
  std::vector<BidderType> types;
  /// States in which this bidder's targeted attribute is 1. Empty means the
  /// hypercube convention: states whose bit with this bidder's index is set.
  std::vector<std::size_t> target;
};

/// Single-item second-price auction with public signaling.
struct AuctionSpec {
  std::vector<Bidder> bidders;
  AuctionObjective objective = AuctionObjective::Welfare;

  std::size_t n() const { return bidders.size(); }
  void validate(std::size_t k) const;
};

struct AuctionUtility {
  AuctionSpec spec;
};

using UtilityKind = std::variant<MaxLinearUtility, WeightedMaxLinearUtility,
                                 PiecewiseConstantUtility, AuctionUtility>;

struct UtilitySpec {
  UtilityKind kind;

  void validate(std::size_t k) const;
  std::string kind_name() const;
};

struct ProblemInstance {
  std::size_t k = 0;
  Posterior prior;
  UtilitySpec utility;
  std::vector<ConstraintSpec> constraints;

  /// Checks k >= 2 and that every component matches dimension k.
  void validate() const;
  std::size_t count(ConstraintMode mode) const;
};

}  // namespace persuade
