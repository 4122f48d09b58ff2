#include "persuade/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "persuade/errors.hpp"
#include "persuade/types.hpp"

namespace persuade {

void DenseMatrix::push_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw InvalidInput("DenseMatrix::push_row: row has " + std::to_string(values.size()) +
                       " entries, expected " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void LinearProgram::validate() const {
  const std::size_t n = num_vars();
  auto check_block = [n](const DenseMatrix& m, const std::vector<double>& rhs, const char* name) {
    if (m.rows() != rhs.size()) {
      throw InvalidInput(std::string("LinearProgram: ") + name + " has " + std::to_string(m.rows()) +
                         " rows but " + std::to_string(rhs.size()) + " right-hand sides");
    }
    if (m.rows() > 0 && m.cols() != n) {
      throw InvalidInput(std::string("LinearProgram: ") + name + " has " + std::to_string(m.cols()) +
                         " columns, expected " + std::to_string(n));
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (double v : m.row(r)) {
        if (!std::isfinite(v)) throw InvalidInput(std::string("LinearProgram: non-finite entry in ") + name);
      }
      if (!std::isfinite(rhs[r])) throw InvalidInput(std::string("LinearProgram: non-finite rhs in ") + name);
    }
  };
  check_block(eq, eq_rhs, "equality rows");
  check_block(le, le_rhs, "inequality rows");
  for (double c : objective) {
    if (!std::isfinite(c)) throw InvalidInput("LinearProgram: non-finite objective coefficient");
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericFailure: return "numeric_failure";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTolerance = 1e-10;
constexpr double kDegenerateStep = 1e-12;

// Standard form: [A | S | Art] y = b, y >= 0, with each row scaled by +-1 so
// that b >= 0. Columns: structural 0..n-1, slacks n..n+m_le-1, then one
// artificial per row that lacks a usable slack.
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options), n_(lp.num_vars()), m_eq_(lp.eq_rhs.size()),
        m_le_(lp.le_rhs.size()), rows_(m_eq_ + m_le_) {
    sign_.assign(rows_, 1.0);
    rhs_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      double b = r < m_eq_ ? lp.eq_rhs[r] : lp.le_rhs[r - m_eq_];
      if (b < 0) sign_[r] = -1.0;
      rhs_[r] = sign_[r] * b;
    }
    artificial_row_.clear();
    basis_.assign(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      bool slack_usable = r >= m_eq_ && sign_[r] > 0;
      if (slack_usable) {
        basis_[r] = n_ + (r - m_eq_);
      } else {
        basis_[r] = n_ + m_le_ + artificial_row_.size();
        artificial_row_.push_back(r);
      }
    }
    total_cols_ = n_ + m_le_ + artificial_row_.size();
    in_basis_.assign(total_cols_, false);
    for (std::size_t c : basis_) in_basis_[c] = true;
    binv_.assign(rows_ * rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) binv_[r * rows_ + r] = 1.0;
    xb_ = rhs_;
    max_iterations_ = opt_.max_iterations ? opt_.max_iterations : 1000 * (rows_ + 1) + 10000;
  }

  LpSolution run() {
    LpSolution sol;
    if (!artificial_row_.empty()) {
      set_phase_costs(true);
      auto st = iterate(true);
      if (st != LpStatus::Optimal) return finish(sol, st);
      double infeas = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (is_artificial(basis_[r])) infeas += std::max(0.0, xb_[r]);
      }
      double scale = 1.0;
      for (double b : rhs_) scale = std::max(scale, std::abs(b));
      if (infeas > opt_.tolerance * scale) {
        sol.message = "phase 1 residual " + std::to_string(infeas);
        return finish(sol, LpStatus::Infeasible);
      }
      drive_out_artificials();
    }
    set_phase_costs(false);
    auto st = iterate(false);
    return finish(sol, st);
  }

 private:
  bool is_artificial(std::size_t col) const { return col >= n_ + m_le_; }

  double entry(std::size_t r, std::size_t col) const {
    if (col < n_) {
      double a = r < m_eq_ ? lp_.eq(r, col) : lp_.le(r - m_eq_, col);
      return sign_[r] * a;
    }
    if (col < n_ + m_le_) {
      return (r >= m_eq_ && col - n_ == r - m_eq_) ? sign_[r] : 0.0;
    }
    return artificial_row_[col - n_ - m_le_] == r ? 1.0 : 0.0;
  }

  void set_phase_costs(bool phase1) {
    cost_.assign(total_cols_, 0.0);
    if (phase1) {
      for (std::size_t c = n_ + m_le_; c < total_cols_; ++c) cost_[c] = -1.0;
    } else {
      for (std::size_t c = 0; c < n_; ++c) cost_[c] = lp_.objective[c];
    }
    phase1_ = phase1;
  }

  bool eligible(std::size_t col) const { return !in_basis_[col] && (phase1_ || !is_artificial(col)); }

  // y^T = c_B^T B^{-1}
  void compute_duals() {
    y_.assign(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* brow = &binv_[i * rows_];
      for (std::size_t r = 0; r < rows_; ++r) y_[r] += cb * brow[r];
    }
  }

  double reduced_cost(std::size_t col) const {
    double d = cost_[col];
    if (col < n_) {
      for (std::size_t r = 0; r < m_eq_; ++r) d -= y_[r] * sign_[r] * lp_.eq(r, col);
      for (std::size_t r = m_eq_; r < rows_; ++r) d -= y_[r] * sign_[r] * lp_.le(r - m_eq_, col);
    } else if (col < n_ + m_le_) {
      std::size_t r = m_eq_ + (col - n_);
      d -= y_[r] * sign_[r];
    } else {
      d -= y_[artificial_row_[col - n_ - m_le_]];
    }
    return d;
  }

  // Structural reduced costs in bulk: row-wise sweeps are cache friendly.
  void price_structural(std::vector<double>& d) const {
    d.assign(lp_.objective.begin(), lp_.objective.end());
    for (std::size_t r = 0; r < rows_; ++r) {
      double w = y_[r] * sign_[r];
      if (w == 0.0) continue;
      auto row = r < m_eq_ ? lp_.eq.row(r) : lp_.le.row(r - m_eq_);
      for (std::size_t c = 0; c < n_; ++c) d[c] -= w * row[c];
    }
    if (phase1_) {
      for (std::size_t c = 0; c < n_; ++c) d[c] -= lp_.objective[c];
    }
  }

  long choose_entering() {
    compute_duals();
    price_structural(scratch_);
    const double tol = opt_.tolerance;
    long best = -1;
    double best_d = tol;
    for (std::size_t c = 0; c < total_cols_; ++c) {
      if (!eligible(c)) continue;
      double d = c < n_ ? scratch_[c] : reduced_cost(c);
      if (bland_) {
        if (d > tol) return static_cast<long>(c);
      } else if (d > best_d) {
        best_d = d;
        best = static_cast<long>(c);
      }
    }
    return best;
  }

  std::vector<double> column(std::size_t col) const {
    std::vector<double> a(rows_);
    for (std::size_t r = 0; r < rows_; ++r) a[r] = entry(r, col);
    std::vector<double> alpha(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* brow = &binv_[i * rows_];
      double s = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) s += brow[r] * a[r];
      alpha[i] = s;
    }
    return alpha;
  }

  void pivot(std::size_t leave_row, std::size_t enter_col, const std::vector<double>& alpha) {
    double piv = alpha[leave_row];
    double theta = xb_[leave_row] / piv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == leave_row) continue;
      xb_[i] -= theta * alpha[i];
      if (xb_[i] < 0 && xb_[i] > -1e-13) xb_[i] = 0.0;
    }
    xb_[leave_row] = theta;
    double* prow = &binv_[leave_row * rows_];
    for (std::size_t r = 0; r < rows_; ++r) prow[r] /= piv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == leave_row || alpha[i] == 0.0) continue;
      double f = alpha[i];
      double* irow = &binv_[i * rows_];
      for (std::size_t r = 0; r < rows_; ++r) irow[r] -= f * prow[r];
    }
    in_basis_[basis_[leave_row]] = false;
    basis_[leave_row] = enter_col;
    in_basis_[enter_col] = true;
  }

  // Rebuilds B^{-1} from scratch by Gauss-Jordan with partial pivoting.
  bool reinvert() {
    std::vector<double> b(rows_ * rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t i = 0; i < rows_; ++i) b[r * rows_ + i] = entry(r, basis_[i]);
    std::vector<double> inv(rows_ * rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) inv[r * rows_ + r] = 1.0;
    for (std::size_t c = 0; c < rows_; ++c) {
      std::size_t p = c;
      double best = std::abs(b[c * rows_ + c]);
      for (std::size_t r = c + 1; r < rows_; ++r) {
        if (std::abs(b[r * rows_ + c]) > best) {
          best = std::abs(b[r * rows_ + c]);
          p = r;
        }
      }
      if (best < 1e-13) return false;
      if (p != c) {
        for (std::size_t j = 0; j < rows_; ++j) {
          std::swap(b[p * rows_ + j], b[c * rows_ + j]);
          std::swap(inv[p * rows_ + j], inv[c * rows_ + j]);
        }
      }
      double d = b[c * rows_ + c];
      for (std::size_t j = 0; j < rows_; ++j) {
        b[c * rows_ + j] /= d;
        inv[c * rows_ + j] /= d;
      }
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == c) continue;
        double f = b[r * rows_ + c];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < rows_; ++j) {
          b[r * rows_ + j] -= f * b[c * rows_ + j];
          inv[r * rows_ + j] -= f * inv[c * rows_ + j];
        }
      }
    }
    // inv now maps row-space to basis positions in the column order of basis_.
    binv_ = std::move(inv);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) s += binv_[i * rows_ + r] * rhs_[r];
      xb_[i] = (s < 0 && s > -1e-11) ? 0.0 : s;
    }
    pivots_since_reinvert_ = 0;
    return true;
  }

  LpStatus iterate(bool phase1) {
    (void)phase1;
    std::size_t degenerate = 0;
    const std::size_t degenerate_limit = opt_.degenerate_factor * std::max<std::size_t>(rows_, 1);
    while (true) {
      if (iterations_ >= max_iterations_) {
        message_ = "iteration limit reached";
        return LpStatus::NumericFailure;
      }
      long enter = choose_entering();
      if (enter < 0) {
        if (pivots_since_reinvert_ == 0) return LpStatus::Optimal;
        if (!reinvert()) {
          message_ = "singular basis on reinversion";
          return LpStatus::NumericFailure;
        }
        for (double v : xb_) {
          if (v < -1e-7) {
            message_ = "basic solution lost feasibility";
            return LpStatus::NumericFailure;
          }
        }
        continue;
      }
      auto alpha = column(static_cast<std::size_t>(enter));
      long leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        if (alpha[i] <= kPivotTolerance) continue;
        double ratio = std::max(0.0, xb_[i]) / alpha[i];
        bool better = leave < 0 || ratio < best_ratio - 1e-12 ||
                      (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[static_cast<std::size_t>(leave)]);
        if (better) {
          best_ratio = leave < 0 ? ratio : std::min(best_ratio, ratio);
          leave = static_cast<long>(i);
        }
      }
      if (leave < 0) {
        message_ = "objective unbounded along column " + std::to_string(enter);
        return LpStatus::Unbounded;
      }
      if (best_ratio <= kDegenerateStep) {
        if (++degenerate > degenerate_limit && !bland_) bland_ = true;
      }
      // Keep x_B nonnegative against rounding in the ratio.
      xb_[static_cast<std::size_t>(leave)] = std::max(0.0, xb_[static_cast<std::size_t>(leave)]);
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter), alpha);
      ++iterations_;
      if (++pivots_since_reinvert_ >= opt_.reinvert_every) {
        if (!reinvert()) {
          message_ = "singular basis on reinversion";
          return LpStatus::NumericFailure;
        }
      }
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      // Row i of B^{-1} A: look for any non-artificial column with a usable entry.
      const double* brow = &binv_[i * rows_];
      long pick = -1;
      for (std::size_t c = 0; c < n_ + m_le_ && pick < 0; ++c) {
        if (in_basis_[c]) continue;
        double s = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) s += brow[r] * entry(r, c);
        if (std::abs(s) > 1e-9) pick = static_cast<long>(c);
      }
      if (pick < 0) continue;  // redundant row: the artificial stays basic at zero
      auto alpha = column(static_cast<std::size_t>(pick));
      pivot(i, static_cast<std::size_t>(pick), alpha);
      ++pivots_since_reinvert_;
    }
    reinvert();
  }

  LpSolution finish(LpSolution& sol, LpStatus st) {
    sol.status = st;
    sol.iterations = iterations_;
    sol.switched_to_bland = bland_;
    if (sol.message.empty()) sol.message = message_;
    if (st != LpStatus::Optimal) return sol;
    if (pivots_since_reinvert_ > 0 && !reinvert()) {
      sol.status = LpStatus::NumericFailure;
      sol.message = "singular final basis";
      return sol;
    }
    sol.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < n_) sol.x[basis_[i]] = std::max(0.0, xb_[i]);
    }
    sol.basis = basis_;
    double v = 0.0;
    for (std::size_t c = 0; c < n_; ++c) v += lp_.objective[c] * sol.x[c];
    sol.value = v;
    return sol;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t n_, m_eq_, m_le_, rows_;
  std::size_t total_cols_ = 0;
  std::vector<double> sign_, rhs_;
  std::vector<std::size_t> artificial_row_;
  std::vector<std::size_t> basis_;
  std::vector<bool> in_basis_;
  std::vector<double> binv_, xb_, y_, cost_, scratch_;
  bool phase1_ = false;
  bool bland_ = false;
  std::size_t iterations_ = 0;
  std::size_t pivots_since_reinvert_ = 0;
  std::size_t max_iterations_ = 0;
  std::string message_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  if (lp.num_rows() == 0) {
    LpSolution sol;
    sol.x.assign(lp.num_vars(), 0.0);
    for (double c : lp.objective) {
      if (c > options.tolerance) {
        sol.status = LpStatus::Unbounded;
        sol.message = "no rows and a positive objective coefficient";
        return sol;
      }
    }
    sol.status = LpStatus::Optimal;
    return sol;
  }
  RevisedSimplex solver(lp, options);
  return solver.run();
}

void write_lp_text(std::ostream& out, const LinearProgram& lp) {
  out << "maximize";
  for (std::size_t c = 0; c < lp.num_vars(); ++c) out << ' ' << lp.objective[c] << "*x" << c;
  out << "\nsubject to\n";
  auto write_rows = [&](const DenseMatrix& m, const std::vector<double>& rhs, const char* rel, const char* tag) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      out << "  " << tag << r << ':';
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m(r, c) != 0.0) out << ' ' << m(r, c) << "*x" << c;
      }
      out << ' ' << rel << ' ' << rhs[r] << '\n';
    }
  };
  write_rows(lp.eq, lp.eq_rhs, "=", "eq");
  write_rows(lp.le, lp.le_rhs, "<=", "le");
  out << "  x >= 0 (" << lp.num_vars() << " columns)\n";
}

namespace {

// Feasibility of { sum_i lambda_i a_i = sum_j mu_j b_j, sum lambda = 1, sum mu = 1 }.
bool combination_feasible(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                          std::span<const double> point, double tolerance) {
  const std::size_t dim = a.front().size();
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  LinearProgram lp;
  lp.objective.assign(na + nb, 0.0);
  std::vector<double> row(na + nb);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < na; ++i) row[i] = a[i][d];
    for (std::size_t j = 0; j < nb; ++j) row[na + j] = -b[j][d];
    lp.eq.push_row(row);
    lp.eq_rhs.push_back(nb == 0 ? point[d] : 0.0);
  }
  std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t i = 0; i < na; ++i) row[i] = 1.0;
  lp.eq.push_row(row);
  lp.eq_rhs.push_back(1.0);
  if (nb > 0) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < nb; ++j) row[na + j] = 1.0;
    lp.eq.push_row(row);
    lp.eq_rhs.push_back(1.0);
  }
  SimplexOptions opt;
  opt.tolerance = tolerance;
  auto sol = solve_lp(lp, opt);
  return sol.status == LpStatus::Optimal;
}

}  // namespace

bool in_convex_hull(std::span<const std::vector<double>> points, std::span<const double> q, double tolerance) {
  if (points.empty()) return false;
  for (const auto& p : points) {
    if (p.size() != q.size()) throw InvalidInput("in_convex_hull: dimension mismatch");
  }
  if (points.size() == 1) {
    return linf_distance(points.front(), q) <= tolerance;
  }
  return combination_feasible(points, {}, q, tolerance);
}

bool hulls_intersect(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                     double tolerance) {
  if (a.empty() || b.empty()) return false;
  for (const auto& p : b) {
    if (p.size() != a.front().size()) throw InvalidInput("hulls_intersect: dimension mismatch");
  }
  return combination_feasible(a, b, {}, tolerance);
}

}  // namespace persuade
