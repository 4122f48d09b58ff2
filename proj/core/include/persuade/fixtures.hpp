#pragma once

// Explicit instances with known optima: the ex-ante/ex-post gap example, the
// support-size lower bound, and the three pooling tightness constructions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persuade/solver.hpp"
#include "persuade/types.hpp"

namespace persuade {

enum class FixtureKind { Example1, Prop3, AppE1, AppE2, AppE3 };

struct FixtureId {
  FixtureKind kind = FixtureKind::Example1;
  double eps0 = 1.0 / 6.0;  // example1
  std::size_t k = 2;        // prop3
  std::size_t m = 1;        // prop3, appE1, appE3
  double M = 2.0;           // appE2

  /// "example1:<eps0>", "prop3:<k>,<m>", "appE1:<m>", "appE2:<M>", "appE3:<m>".
  static FixtureId parse(const std::string& text);
  std::string to_string() const;
  /// Throws InvalidInput on out-of-range parameters.
  void validate() const;
};

struct Fixture {
  FixtureId id;
  ProblemInstance instance;
  /// Reference optima where the construction defines them (appE1: the value
  /// before and after pooling).
  std::optional<double> ex_ante_opt;
  std::optional<double> ex_post_opt;
  /// prop3: the unique optimum; appE1: full revelation.
  std::optional<SignalingScheme> reference;
};

Fixture build_fixture(const FixtureId& id);

struct FixtureCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  bool pass = false;
};

struct FixtureReport {
  FixtureId id;
  bool pass = false;
  std::vector<FixtureCheck> checks;
  std::optional<SignalingScheme> result_scheme;
};

FixtureReport verify_fixture(const FixtureId& id);

/// Pairs each posterior with its partner across bit j of the state index
/// (the partner whose f_j differs), for hypercube instances.
PairSelector bit_pairing_selector(std::size_t m);

/// Valid schemes for prop3 drawn by rejection sampling; used as a randomized
/// upper-bound check.
struct Prop3Sample {
  std::size_t drawn = 0;
  std::size_t valid = 0;
  double max_value = 0.0;
};
Prop3Sample sample_prop3_schemes(const Fixture& fixture, std::size_t valid_target, std::uint64_t seed);

}  // namespace persuade
