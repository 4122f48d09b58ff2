#include "persuade/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "persuade/auction.hpp"
#include "persuade/constraints.hpp"
#include "persuade/errors.hpp"
#include "persuade/objectives.hpp"
#include "persuade/persuasion_lp.hpp"

namespace persuade {

std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::BiCriteria: return "bi_criteria";
    case SolveMode::SingleCriteria: return "single_criteria";
    case SolveMode::ExPostRestricted: return "ex_post_restricted";
    case SolveMode::Oracle: return "oracle";
  }
  return "unknown";
}

namespace {

constexpr double kExPostSlack = 1e-12;

bool passes_ex_post(const ProblemInstance& instance, std::span<const double> q) {
  for (const auto& c : instance.constraints) {
    if (c.mode == ConstraintMode::ExPost && eval_constraint(c, q, instance.prior) > c.bound + kExPostSlack) return false;
  }
  return true;
}

void fill_outcomes(const ProblemInstance& instance, SolveReport& report) {
  VerifyReport v = verify_scheme(instance, report.scheme);
  report.constraints = v.constraints;
  report.max_violation = v.max_violation();
  report.plausibility_deviation = v.deviation;
  report.value = v.utility;
}

SignalingScheme scheme_from_lp(const PersuasionData& data, const LpSolution& sol, double threshold) {
  std::vector<Posterior> support;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t v = 0; v < sol.x.size(); ++v) {
    if (sol.x[v] > threshold) {
      auto q = data.point(v);
      support.emplace_back(std::vector<double>(q.begin(), q.end()));
      probs.push_back(sol.x[v]);
      total += sol.x[v];
    }
  }
  if (support.empty()) throw NumericFailure("solver: LP solution has no positive mass");
  for (double& p : probs) p /= total;
  return SignalingScheme(std::move(support), std::move(probs));
}

LpSolution run_lp(const PersuasionData& data, const Posterior& prior, const SimplexOptions& options,
                  SolveReport& report) {
  if (data.size() == 0) throw Infeasible("solver: no candidate posterior satisfies the ex-post constraints");
  LinearProgram lp = build_persuasion_lp(data, prior);
  report.lp_rows = lp.num_rows();
  LpSolution sol = solve_lp(lp, options);
  report.lp_iterations = sol.iterations;
  if (sol.status == LpStatus::Infeasible) {
    throw Infeasible("solver: the persuasion LP is infeasible (" + sol.message + ")");
  }
  if (sol.status != LpStatus::Optimal) {
    throw NumericFailure("solver: LP returned " + to_string(sol.status) + ": " + sol.message);
  }
  report.lp_value = sol.value;
  return sol;
}

}  // namespace

SolveReport bi_criteria_solve(const ProblemInstance& instance, double eps, const SolveOptions& options) {
  instance.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("bi_criteria_solve: eps must be positive");
  const std::size_t k = instance.k;

  std::vector<SmoothedConstraint> smoothed;
  double M = 0.0;
  for (const auto& c : instance.constraints) {
    if (c.mode != ConstraintMode::ExAnte) continue;
    smoothed.push_back(smooth_constraint(c, eps / 2.0, instance.prior));
    M = std::max(M, smoothed.back().lipschitz_constant);
  }
  ApproxOptions approx;
  approx.grid_multiple = options.grid_multiple;
  approx.vertex_cap = options.vertex_cap;
  GriddedUtility gu = build_upper_approx(instance.utility, k, eps / 2.0, M, approx);

  SolveReport report;
  report.mode = smoothed.empty() && instance.count(ConstraintMode::ExPost) > 0 ? SolveMode::ExPostRestricted
                                                                                : SolveMode::BiCriteria;
  report.eps = eps;
  report.grid_denominator = gu.grid.denominator();
  report.vertex_count = gu.num_points();
  report.lipschitz_bound = M;

  const std::vector<double> values = gu.point_values();
  PersuasionData data;
  data.k = k;
  data.rows.resize(smoothed.size());
  for (std::size_t v = 0; v < gu.num_points(); ++v) {
    auto q = gu.point(v);
    if (!passes_ex_post(instance, q)) continue;
    data.points.insert(data.points.end(), q.begin(), q.end());
    data.values.push_back(values[v]);
    for (std::size_t i = 0; i < smoothed.size(); ++i) data.rows[i].push_back(smoothed[i](q));
  }
  for (const auto& g : smoothed) data.bounds.push_back(g.source.bound + eps / 2.0);
  report.candidate_count = data.size();

  LpSolution sol = run_lp(data, instance.prior, options.lp, report);
  report.scheme = scheme_from_lp(data, sol, options.prune_threshold);
  fill_outcomes(instance, report);
  return report;
}

SolveReport single_criteria_solve(const ProblemInstance& instance, double eps, double slater_margin,
                                  const SolveOptions& options) {
  instance.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("single_criteria_solve: eps must be positive");
  if (!(slater_margin > 0.0)) throw InvalidInput("single_criteria_solve: slater margin must be positive");
  if (eps > 2.0 * slater_margin) {
    throw InvalidInput("single_criteria_solve: eps = " + std::to_string(eps) + " exceeds twice the Slater margin " +
                       std::to_string(slater_margin));
  }
  if (instance.count(ConstraintMode::ExAnte) == 0) {
    SolveReport r = bi_criteria_solve(instance, eps, options);
    r.mode = SolveMode::SingleCriteria;
    return r;
  }
  ProblemInstance tightened = instance;
  for (auto& c : tightened.constraints) {
    if (c.mode == ConstraintMode::ExAnte) c.bound -= eps / 2.0;
  }
  SolveReport report;
  try {
    report = bi_criteria_solve(tightened, eps / 2.0, options);
  } catch (const Infeasible& e) {
    throw Infeasible(std::string("single_criteria_solve: the tightened problem is infeasible, so eps is outside the "
                                 "admissible range for the claimed Slater margin (") +
                     e.what() + ")");
  }
  report.mode = SolveMode::SingleCriteria;
  report.eps = eps;
  fill_outcomes(instance, report);
  return report;
}

SolveReport grid_solve(const ProblemInstance& instance, const SimplexGrid& grid, const SolveOptions& options) {
  instance.validate();
  if (grid.dim() != instance.k) throw InvalidInput("grid_solve: grid dimension differs from k");
  PersuasionData data;
  data.k = instance.k;
  std::vector<const ConstraintSpec*> ante;
  for (const auto& c : instance.constraints) {
    if (c.mode == ConstraintMode::ExAnte) ante.push_back(&c);
  }
  data.rows.resize(ante.size());
  for (std::size_t v = 0; v < grid.num_vertices(); ++v) {
    auto q = grid.vertex(v);
    if (!passes_ex_post(instance, q)) continue;
    data.points.insert(data.points.end(), q.begin(), q.end());
    data.values.push_back(eval_utility(instance.utility, q));
    for (std::size_t i = 0; i < ante.size(); ++i) data.rows[i].push_back(eval_constraint(*ante[i], q, instance.prior));
  }
  for (const auto* c : ante) data.bounds.push_back(c->bound);
  SolveReport report;
  report.mode = ante.empty() && instance.count(ConstraintMode::ExPost) > 0 ? SolveMode::ExPostRestricted
                                                                            : SolveMode::BiCriteria;
  report.grid_denominator = grid.denominator();
  report.vertex_count = grid.num_vertices();
  report.candidate_count = data.size();
  LpSolution sol = run_lp(data, instance.prior, options.lp, report);
  report.scheme = scheme_from_lp(data, sol, options.prune_threshold);
  fill_outcomes(instance, report);
  return report;
}

// ---------------------------------------------------------------------------
// Pooling

namespace {

double expectation(const ConstraintSpec& c, const std::vector<std::vector<double>>& pts, const std::vector<double>& mass,
                   const Posterior& prior) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += mass[i] * eval_constraint(c, pts[i], prior);
  return s;
}

double deviation(const std::vector<std::vector<double>>& pts, const std::vector<double>& mass, const Posterior& prior) {
  std::vector<double> b(prior.dim(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t w = 0; w < b.size(); ++w) b[w] += mass[i] * pts[i][w];
  }
  return linf_distance(b, prior.weights());
}

std::vector<double> mix(double lambda, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out[w] = lambda * a[w] + (1.0 - lambda) * b[w];
  return out;
}

}  // namespace

SignalingScheme ex_ante_to_ex_post(const SignalingScheme& scheme, std::span<const ConstraintSpec> constraints,
                                   const Posterior& prior, const PoolingOptions& options) {
  if (scheme.dim() != prior.dim()) throw InvalidInput("ex_ante_to_ex_post: dimension mismatch");
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    constraints[j].validate(prior.dim());
    if (!constraints[j].is_convex()) {
      throw InvalidInput("ex_ante_to_ex_post: constraint " + std::to_string(j) + " (" + constraints[j].kind_name() +
                         ") is not convex");
    }
  }
  std::vector<std::vector<double>> pts;
  std::vector<double> mass;
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    if (scheme.probs()[i] <= 0.0) continue;
    pts.push_back(scheme.support()[i].vec());
    mass.push_back(scheme.probs()[i]);
  }
  std::vector<double> expect(constraints.size());
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    expect[j] = expectation(constraints[j], pts, mass, prior);
    if (expect[j] > constraints[j].bound + 1e-9) {
      throw Infeasible("ex_ante_to_ex_post: input violates ex-ante constraint " + std::to_string(j) + " (E[f] = " +
                       std::to_string(expect[j]) + " > " + std::to_string(constraints[j].bound) + ")");
    }
  }
  PoolingTrace* trace = options.trace;
  if (trace) {
    *trace = PoolingTrace{};
    trace->initial_expectations = expect;
  }
  const double tau = options.margin;
  constexpr double kMassFloor = 1e-15;

  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const ConstraintSpec& c = constraints[j];
    auto f = [&](const std::vector<double>& q) { return eval_constraint(c, q, prior); };
    if (trace) trace->support_at_start.push_back(pts.size());
    std::size_t steps = 0;
    const std::size_t step_limit = 4 * pts.size() + 64;
    while (true) {
      if (steps > step_limit) {
        throw NumericFailure("ex_ante_to_ex_post: constraint " + std::to_string(j) + " did not settle after " +
                             std::to_string(steps) + " pooling steps");
      }
      std::vector<double> fv(pts.size());
      std::vector<std::size_t> S, T;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        fv[i] = f(pts[i]);
        if (fv[i] > c.bound + tau) T.push_back(i);
        else if (fv[i] < c.bound - tau) S.push_back(i);
      }
      if (T.empty()) break;
      if (S.empty()) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (fv[i] < c.bound) S.push_back(i);
        }
        if (S.empty()) {
          throw Infeasible("ex_ante_to_ex_post: no posterior strictly satisfies constraint " + std::to_string(j));
        }
      }
      std::size_t s, t;
      if (options.selector) {
        std::tie(s, t) = options.selector(j, pts, fv, S, T);
        if (std::find(S.begin(), S.end(), s) == S.end() || std::find(T.begin(), T.end(), t) == T.end()) {
          throw InvalidInput("ex_ante_to_ex_post: pair selector returned an invalid pair");
        }
      } else {
        t = T.front();
        for (auto i : T) {
          if (fv[i] > fv[t]) t = i;
        }
        s = S.front();
        for (auto i : S) {
          if (fv[i] < fv[s]) s = i;
        }
      }
      const auto& qs = pts[s];
      const auto& qt = pts[t];
      // f(mix(lambda)) - c is positive at 0 (q_T) and negative at 1 (q_S).
      double lo = 0.0, hi = 1.0;
      double f_hi = fv[s];
      for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mix(mid, qs, qt));
        if (fm > c.bound) lo = mid;
        else {
          hi = mid;
          f_hi = fm;
        }
        if (hi - lo < 1e-16) break;
      }
      const bool found = f_hi >= c.bound - 1e-9 && f_hi <= c.bound;
      if (!found) {
        throw NumericFailure("ex_ante_to_ex_post: boundary search failed on constraint " + std::to_string(j) +
                             "; the constraint may not be convex");
      }
      const double lambda = hi;
      std::vector<double> qc = mix(lambda, qs, qt);
      if (f_hi > lambda * fv[s] + (1.0 - lambda) * fv[t] + 1e-9) {
        throw NumericFailure("ex_ante_to_ex_post: convexity check failed on constraint " + std::to_string(j));
      }
      const double rs = mass[s], rt = mass[t];
      double new_rs, new_rt, rc;
      const double needed = lambda * rt / (1.0 - lambda);
      if (lambda >= 1.0 - 1e-15) {
        // The source already sits on the boundary: merge the pair.
        for (std::size_t w = 0; w < qc.size(); ++w) qc[w] = (rs * qs[w] + rt * qt[w]) / (rs + rt);
        f_hi = f(qc);
        new_rs = new_rt = 0.0;
        rc = rs + rt;
      } else if (std::abs(needed - rs) <= 1e-11 * (rs + rt)) {
        new_rs = new_rt = 0.0;
        rc = rs + rt;
      } else if (needed <= rs) {
        new_rs = rs - needed;
        new_rt = 0.0;
        rc = rt / (1.0 - lambda);
      } else {
        new_rt = rt - (1.0 - lambda) * rs / lambda;
        new_rs = 0.0;
        rc = rs / lambda;
      }
      if (new_rs < kMassFloor) new_rs = 0.0;
      if (new_rt < kMassFloor) new_rt = 0.0;
      mass[s] = new_rs;
      mass[t] = new_rt;
      // q_c takes the slot of a removed point so the order of the support is kept.
      std::size_t slot = new_rt == 0.0 ? t : (new_rs == 0.0 ? s : pts.size());
      if (slot == pts.size()) {
        pts.push_back(qc);
        mass.push_back(rc);
      } else {
        pts[slot] = qc;
        mass[slot] = rc;
      }
      std::vector<std::vector<double>> keep_pts;
      std::vector<double> keep_mass;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (mass[i] > kMassFloor) {
          keep_pts.push_back(std::move(pts[i]));
          keep_mass.push_back(mass[i]);
        }
      }
      pts = std::move(keep_pts);
      mass = std::move(keep_mass);
      ++steps;
      if (trace) {
        PoolingStep step;
        step.constraint = j;
        step.lambda = lambda;
        step.f_source = fv[s];
        step.f_target = fv[t];
        step.f_pooled = f_hi;
        step.deviation = deviation(pts, mass, prior);
        for (const auto& cc : constraints) step.expectations.push_back(expectation(cc, pts, mass, prior));
        step.support_size = pts.size();
        trace->steps.push_back(std::move(step));
      }
    }
    if (trace) trace->steps_per_constraint.push_back(steps);
  }

  std::vector<Posterior> support;
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double sum = 0.0;
    for (double& x : pts[i]) {
      x = std::max(0.0, x);
      sum += x;
    }
    for (double& x : pts[i]) x /= sum;
    support.emplace_back(pts[i]);
    total += mass[i];
  }
  for (double& m : mass) m /= total;
  return SignalingScheme(std::move(support), std::move(mass));
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

using Rational = boost::multiprecision::cpp_rational;

double to_double(double x) { return x; }
double to_double(const Rational& x) { return x.convert_to<double>(); }

template <typename Scalar>
bool is_zero(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, double>) return std::abs(x) <= 1e-12;
  else return x == 0;
}

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < 0 ? Scalar(-x) : x;
}

// Solves the (R x s) system A x = b when it has a unique solution.
template <typename Scalar>
bool solve_unique(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b, std::vector<Scalar>& x) {
  const std::size_t R = a.size();
  const std::size_t s = a.front().size();
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < s; ++col) {
    std::size_t piv = row;
    for (std::size_t r = row; r < R; ++r) {
      if (abs_value(a[r][col]) > abs_value(a[piv][col])) piv = r;
    }
    if (piv >= R || is_zero(a[piv][col])) return false;
    std::swap(a[piv], a[row]);
    std::swap(b[piv], b[row]);
    for (std::size_t r = 0; r < R; ++r) {
      if (r == row || is_zero(a[r][col])) continue;
      Scalar f = a[r][col] / a[row][col];
      for (std::size_t c2 = col; c2 < s; ++c2) a[r][c2] -= f * a[row][c2];
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < R; ++r) {
    if (!is_zero(b[r])) return false;
  }
  x.assign(s, Scalar(0));
  for (std::size_t r = 0; r < s; ++r) x[pivot_col[r]] = b[r] / a[r][pivot_col[r]];
  return true;
}

template <typename Scalar>
struct OracleProblem {
  std::size_t k = 0;
  std::vector<std::vector<Scalar>> coords;  // per candidate
  std::vector<Scalar> values;
  std::vector<std::vector<Scalar>> rows;  // per ex-ante constraint, per candidate
  std::vector<Scalar> bounds;
  std::vector<Scalar> prior;
};

template <typename Scalar>
bool feasible_nonneg(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, double>) return x >= -1e-12;
  else return x >= 0;
}

template <typename Scalar>
bool within(const Scalar& lhs, const Scalar& rhs) {
  if constexpr (std::is_same_v<Scalar, double>) return lhs <= rhs + 1e-12;
  else return lhs <= rhs;
}

template <typename Scalar>
bool better(const Scalar& a, const Scalar& b) {
  if constexpr (std::is_same_v<Scalar, double>) return a > b + 1e-12;
  else return a > b;
}

template <typename Scalar>
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t r = idx.size();
  std::size_t i = r;
  while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

template <typename Scalar>
std::pair<std::vector<std::size_t>, std::vector<Scalar>> oracle_search(const OracleProblem<Scalar>& P, Scalar& best_value) {
  const std::size_t n = P.values.size();
  const std::size_t m = P.rows.size();
  const std::size_t k = P.k;
  bool have = false;
  std::vector<std::size_t> best_support;
  std::vector<Scalar> best_x;
  for (std::size_t size = 1; size <= std::min(n, k + m); ++size) {
    std::vector<std::size_t> S(size);
    for (std::size_t i = 0; i < size; ++i) S[i] = i;
    const std::size_t tsize = size > k ? size - k : 0;
    do {
      std::vector<std::size_t> T(tsize);
      for (std::size_t i = 0; i < tsize; ++i) T[i] = i;
      do {
        std::vector<std::vector<Scalar>> a;
        std::vector<Scalar> b;
        for (std::size_t w = 0; w < k; ++w) {
          std::vector<Scalar> row(size);
          for (std::size_t i = 0; i < size; ++i) row[i] = P.coords[S[i]][w];
          a.push_back(std::move(row));
          b.push_back(P.prior[w]);
        }
        for (std::size_t t : T) {
          std::vector<Scalar> row(size);
          for (std::size_t i = 0; i < size; ++i) row[i] = P.rows[t][S[i]];
          a.push_back(std::move(row));
          b.push_back(P.bounds[t]);
        }
        std::vector<Scalar> x;
        if (!solve_unique(a, b, x)) continue;
        bool ok = true;
        for (const auto& xi : x) ok = ok && feasible_nonneg(xi);
        for (std::size_t r = 0; r < m && ok; ++r) {
          Scalar lhs(0);
          for (std::size_t i = 0; i < size; ++i) lhs += x[i] * P.rows[r][S[i]];
          ok = within(lhs, P.bounds[r]);
        }
        if (!ok) continue;
        Scalar value(0);
        for (std::size_t i = 0; i < size; ++i) value += x[i] * P.values[S[i]];
        if (!have || better(value, best_value)) {
          have = true;
          best_value = value;
          best_support = S;
          best_x = x;
        }
      } while (tsize > 0 && next_combination<Scalar>(T, m));
    } while (next_combination<Scalar>(S, n));
  }
  if (!have) throw Infeasible("oracle_solve: no valid scheme is supported on the candidate points");
  return {best_support, best_x};
}

template <typename Scalar>
SolveReport oracle_finish(const ProblemInstance& instance, const std::vector<std::vector<double>>& cand,
                          const OracleProblem<Scalar>& P) {
  Scalar best_value(0);
  auto [support, x] = oracle_search(P, best_value);
  std::vector<Posterior> pts;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    double xi = std::max(0.0, to_double(x[i]));
    if (xi <= 0.0) continue;
    pts.emplace_back(cand[support[i]]);
    probs.push_back(xi);
    total += xi;
  }
  for (double& p : probs) p /= total;
  SolveReport report;
  report.mode = SolveMode::Oracle;
  report.scheme = SignalingScheme(std::move(pts), std::move(probs));
  report.lp_value = to_double(best_value);
  report.candidate_count = cand.size();
  report.vertex_count = cand.size();
  fill_outcomes(instance, report);
  return report;
}

template <typename Scalar>
OracleProblem<Scalar> oracle_problem(const ProblemInstance& instance, const std::vector<std::vector<double>>& cand,
                                     const std::vector<std::vector<Scalar>>& coords) {
  OracleProblem<Scalar> P;
  P.k = instance.k;
  P.coords = coords;
  for (const auto& q : cand) P.values.push_back(Scalar(eval_utility(instance.utility, q)));
  for (const auto& c : instance.constraints) {
    if (c.mode != ConstraintMode::ExAnte) continue;
    std::vector<Scalar> row;
    for (const auto& q : cand) row.push_back(Scalar(eval_constraint(c, q, instance.prior)));
    P.rows.push_back(std::move(row));
    P.bounds.push_back(Scalar(c.bound));
  }
  for (double p : instance.prior.weights()) P.prior.push_back(Scalar(p));
  return P;
}

SolveReport oracle_impl(const ProblemInstance& instance, const std::vector<std::vector<double>>& points,
                        const std::vector<std::vector<Rational>>* exact_coords, const OracleOptions& options) {
  instance.validate();
  if (instance.k > 3) throw ResourceLimit("oracle_solve: k = " + std::to_string(instance.k) + " exceeds the limit of 3");
  std::vector<std::vector<double>> cand;
  std::vector<std::vector<Rational>> cand_exact;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != instance.k) throw InvalidInput("oracle_solve: point dimension mismatch");
    if (!passes_ex_post(instance, points[i])) continue;
    cand.push_back(points[i]);
    if (exact_coords) cand_exact.push_back((*exact_coords)[i]);
  }
  if (cand.size() > options.max_points) {
    throw ResourceLimit("oracle_solve: " + std::to_string(cand.size()) + " candidate points exceed the limit of " +
                        std::to_string(options.max_points));
  }
  if (cand.empty()) throw Infeasible("oracle_solve: no candidate point satisfies the ex-post constraints");
  if (options.exact) {
    if (!exact_coords) {
      for (const auto& q : cand) {
        std::vector<Rational> r;
        for (double v : q) r.emplace_back(v);
        cand_exact.push_back(std::move(r));
      }
    }
    return oracle_finish(instance, cand, oracle_problem<Rational>(instance, cand, cand_exact));
  }
  return oracle_finish(instance, cand, oracle_problem<double>(instance, cand, cand));
}

}  // namespace

SolveReport oracle_solve(const ProblemInstance& instance, std::span<const std::vector<double>> points,
                         const OracleOptions& options) {
  std::vector<std::vector<double>> pts(points.begin(), points.end());
  return oracle_impl(instance, pts, nullptr, options);
}

SolveReport oracle_solve(const ProblemInstance& instance, const SimplexGrid& grid, const OracleOptions& options) {
  std::vector<std::vector<double>> pts;
  std::vector<std::vector<Rational>> exact;
  for (std::size_t v = 0; v < grid.num_vertices(); ++v) {
    auto q = grid.vertex(v);
    pts.emplace_back(q.begin(), q.end());
    std::vector<Rational> r;
    for (std::size_t n : grid.lattice(v)) r.emplace_back(Rational(n) / Rational(grid.denominator()));
    exact.push_back(std::move(r));
  }
  SolveReport r = oracle_impl(instance, pts, &exact, options);
  r.grid_denominator = grid.denominator();
  return r;
}

}  // namespace persuade
