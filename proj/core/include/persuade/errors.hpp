#pragma once

#include <stdexcept>
#include <string>

namespace persuade {

/// Malformed or inconsistent input: bad dimensions, broken invariants, unknown kinds.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The optimization problem (or a pooling precondition) has no valid solution.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size guard tripped (grid vertex cap, profile cap, oracle size).
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point breakdown: singular basis, failed bisection, precision underflow.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace persuade
