#pragma once

// Dense revised primal simplex for small-row, many-column linear programs.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace persuade {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  /// Appends a row; the first row fixes the column count.
  void push_row(std::span<const double> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// maximize objective . x  s.t.  eq * x = eq_rhs,  le * x <= le_rhs,  x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  DenseMatrix eq;
  std::vector<double> eq_rhs;
  DenseMatrix le;
  std::vector<double> le_rhs;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return eq_rhs.size() + le_rhs.size(); }
  /// Throws InvalidInput on inconsistent shapes or non-finite entries.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericFailure };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::NumericFailure;
  std::vector<double> x;
  double value = 0.0;
  /// Standard-form column indices of the final basis; indices >= num_vars
  /// denote slack or artificial columns.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
  bool switched_to_bland = false;
  std::string message;
};

struct SimplexOptions {
  /// Reduced-cost optimality and primal feasibility tolerance.
  double tolerance = 1e-9;
  /// Degenerate pivots allowed (times the row count) before Bland's rule.
  std::size_t degenerate_factor = 50;
  /// Pivots between basis reinversions.
  std::size_t reinvert_every = 50;
  /// 0 picks a limit from the problem size.
  std::size_t max_iterations = 0;
};

/// Two-phase revised primal simplex with Dantzig pricing; ties are broken by
/// lowest index so identical inputs give bit-identical outputs.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Plain-text row/column listing of the program.
void write_lp_text(std::ostream& out, const LinearProgram& lp);

/// True if q lies in the convex hull of the given points (feasibility LP).
bool in_convex_hull(std::span<const std::vector<double>> points, std::span<const double> q,
                    double tolerance = 1e-9);

/// True if the convex hulls of two point sets intersect.
bool hulls_intersect(std::span<const std::vector<double>> a,
                     std::span<const std::vector<double>> b, double tolerance = 1e-9);

}  // namespace persuade
