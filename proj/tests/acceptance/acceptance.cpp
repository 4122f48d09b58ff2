// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "persuade/auction.hpp"
#include "persuade/constraints.hpp"
#include "persuade/errors.hpp"
#include "persuade/fixtures.hpp"
#include "persuade/model.hpp"
#include "persuade/solver.hpp"
#include "support/generators.hpp"

using namespace persuade;
using persuade::testing::Gen;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double utility_of(const ProblemInstance& inst, const SignalingScheme& s) {
  return scheme_expectation(s, [&](const Posterior& q) { return eval_utility(inst.utility, q.weights()); });
}

double expectation(const SignalingScheme& s, const ConstraintSpec& c, const Posterior& prior) {
  return scheme_expectation(s, [&](const Posterior& q) { return eval_constraint(c, q.weights(), prior); });
}

// Criterion 1
Outcome example1_gap() {
  Outcome o;
  const double eps = 0.01;
  double worst_ante = 1e300, worst_post = 0.0, slowest = 0.0;
  for (double eps0 : {1.0 / 6.0, 0.05}) {
    auto fx = build_fixture(FixtureId{FixtureKind::Example1, eps0});
    ProblemInstance ante = fx.instance;
    ante.constraints[0].mode = ConstraintMode::ExAnte;
    auto t0 = Clock::now();
    auto a = bi_criteria_solve(ante, eps);
    auto p = bi_criteria_solve(fx.instance, eps);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const double opt = 2.0 * eps0 / (1.0 + 2.0 * eps0);
    worst_ante = std::min(worst_ante, a.value - (0.5 - eps));
    worst_post = std::max(worst_post, std::abs(p.value - opt));
    o.require(a.value >= 0.5 - eps, fmt("eps0=%.4g: ex-ante value %.6f < 1/2 - eps", eps0, a.value));
    o.require(std::abs(p.value - opt) <= std::max(eps, 1e-6),
              fmt("eps0=%.4g: ex-post value %.6f vs %.6f", eps0, p.value, opt));
    o.require(dt < 5.0, fmt("eps0=%.4g took %.2f s", eps0, dt));
  }
  if (o.pass) o.detail = fmt("ex-ante margin %.4f, ex-post error %.2e, slowest %.3f s", worst_ante, worst_post, slowest);
  return o;
}

// Criterion 2
Outcome hypercube_pooling() {
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  for (std::size_t m : {1, 2, 3}) {
    auto fx = build_fixture(FixtureId{FixtureKind::AppE1, 0.1, 2, m});
    const auto& inst = fx.instance;
    auto full = SignalingScheme::full_revelation(inst.prior);
    PoolingOptions opt;
    opt.selector = bit_pairing_selector(m);
    auto t0 = Clock::now();
    auto out = ex_ante_to_ex_post(full, inst.constraints, inst.prior, opt);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const double ratio = utility_of(inst, out) / utility_of(inst, full);
    const double target = std::ldexp(1.0, -static_cast<int>(m));
    worst = std::max(worst, std::abs(ratio - target));
    o.require(std::abs(ratio - target) <= 1e-9, fmt("m=%.0f: ratio %.12f vs %.12f", double(m), ratio, target));
    o.require(verify_scheme(inst, out).valid, fmt("m=%.0f: output violates an ex-post constraint", double(m)));
    o.require(dt < 1.0, fmt("m=%.0f took %.2f s", double(m), dt));
  }
  if (o.pass) o.detail = fmt("max |ratio - 2^-m| = %.2e, slowest %.4f s", worst, slowest);
  return o;
}

// Criterion 3
Outcome appendix_e2() {
  Outcome o;
  double worst = 0.0;
  std::vector<std::vector<double>> pts;
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) pts.push_back({1.0 - x, x});
  for (double M : {1.5, 3.0, 10.0}) {
    auto fx = build_fixture(FixtureId{FixtureKind::AppE2, 0.1, 2, 1, M});
    auto rep = verify_fixture(fx.id);
    o.require(rep.pass, fmt("M=%.3g: verify_fixture failed", M));
    ProblemInstance ante = fx.instance;
    ante.constraints[0].mode = ConstraintMode::ExAnte;
    const double ratio = oracle_solve(ante, pts).value / oracle_solve(fx.instance, pts).value;
    worst = std::max(worst, std::abs(ratio - M));
    o.require(std::abs(ratio - M) <= 1e-9, fmt("M=%.3g: ratio %.12f", M, ratio));
  }
  if (o.pass) o.detail = fmt("max |ratio - M| = %.2e", worst);
  return o;
}

// Criterion 4
Outcome appendix_e3() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t m : {1, 2, 3}) {
    auto fx = build_fixture(FixtureId{FixtureKind::AppE3, 0.1, 2, m});
    const std::size_t k = m + 1;
    SimplexGrid grid = build_grid_with_denominator(k, k);
    ProblemInstance ante = fx.instance;
    for (auto& c : ante.constraints) c.mode = ConstraintMode::ExAnte;
    const double gap = grid_solve(ante, grid).value / grid_solve(fx.instance, grid).value;
    worst = std::max(worst, std::abs(gap - double(k)));
    o.require(std::abs(gap - double(k)) <= 1e-6, fmt("m=%.0f: gap %.9f", double(m), gap));
  }
  if (o.pass) o.detail = fmt("max |gap - (m+1)| = %.2e", worst);
  return o;
}

// Criterion 5
Outcome prop3() {
  Outcome o;
  double best_sample = 0.0;
  for (auto [k, m] : {std::pair<std::size_t, std::size_t>{2, 1}, {2, 2}, {3, 2}}) {
    auto fx = build_fixture(FixtureId{FixtureKind::Prop3, 0.1, k, m});
    auto rep = verify_scheme(fx.instance, *fx.reference);
    o.require(rep.valid, fmt("(%.0f,%.0f): reference scheme fails verification", double(k), double(m)));
    o.require(std::abs(rep.utility - 0.75) <= 1e-12, fmt("(%.0f,%.0f): value %.15f", double(k), double(m), rep.utility));
    o.require(fx.reference->size() == k + m, fmt("(%.0f,%.0f): support size %.0f", double(k), double(m),
                                                 double(fx.reference->size())));
    auto s = sample_prop3_schemes(fx, 1000, 1234 + k * 10 + m);
    o.require(s.valid >= 1000, fmt("(%.0f,%.0f): only %.0f valid samples", double(k), double(m), double(s.valid)));
    o.require(s.max_value <= 0.75 + 1e-9, fmt("(%.0f,%.0f): sampled value %.12f", double(k), double(m), s.max_value));
    best_sample = std::max(best_sample, s.max_value);
  }
  if (o.pass) o.detail = fmt("best sampled valid value %.6f", best_sample);
  return o;
}

// Random instances shared by criteria 6, 7 and 8.
struct RandomCase {
  ProblemInstance instance;
  double slater = 0.0;
};

std::vector<RandomCase> random_cases(std::size_t count, std::uint64_t seed) {
  Gen g(seed);
  std::vector<RandomCase> out;
  while (out.size() < count) {
    RandomCase rc;
    ProblemInstance& inst = rc.instance;
    inst.k = 2 + g.index(2);
    const std::size_t k = inst.k;
    inst.prior = Posterior(g.interior_point(k, 0.1));
    inst.utility = UtilitySpec{g.max_linear(k, 1 + g.index(3))};
    const std::size_t m = g.index(4);
    rc.slater = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      ConstraintSpec c;
      switch (g.index(3)) {
        case 0: c.kind = LinearConstraint{g.nonneg_vector(k)}; break;
        case 1: c.kind = NormDistanceConstraint{static_cast<NormOrder>(g.index(3))}; break;
        default: c.kind = g.grouped_kl(k, inst.prior.vec()); break;
      }
      c.mode = g.coin(0.25) ? ConstraintMode::ExPost : ConstraintMode::ExAnte;
      const double at_prior = eval_constraint(c, inst.prior.vec(), inst.prior);
      const double slack = g.uniform(0.02, 0.3);
      c.bound = at_prior + slack;
      rc.slater = std::min(rc.slater, slack);
      inst.constraints.push_back(c);
    }
    out.push_back(rc);
  }
  return out;
}

std::size_t oracle_denominator(std::size_t k) { return k == 2 ? 12 : 4; }

struct CaseResult {
  bool ok = false;
  SolveReport bi;
};

// Criteria 6 and 8 (first half)
Outcome fptas_contract(const std::vector<RandomCase>& cases, Outcome& support, std::vector<CaseResult>& at_005) {
  Outcome o;
  double worst_gap = 1e300, worst_true_gap = 1e300, worst_violation = 0.0, slowest = 0.0;
  std::size_t compared = 0;
  at_005.assign(cases.size(), {});
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& inst = cases[c].instance;
    const std::size_t k = inst.k;
    const std::size_t coarse = oracle_denominator(k);
    SimplexGrid grid = build_grid_with_denominator(k, coarse);
    std::optional<SolveReport> oracle;
    try {
      oracle = oracle_solve(inst, grid);
    } catch (const Infeasible&) {
    }
    for (double eps : {0.1, 0.02}) {
      SolveOptions opt;
      opt.grid_multiple = coarse;
      auto t0 = Clock::now();
      SolveReport r;
      try {
        r = bi_criteria_solve(inst, eps, opt);
      } catch (const std::exception& e) {
        o.require(false, fmt("case %.0f eps %.2f: ", double(c), eps) + e.what());
        continue;
      }
      const double dt = seconds_since(t0);
      slowest = std::max(slowest, dt);
      o.require(dt < 10.0, fmt("case %.0f eps %.2f took %.1f s", double(c), eps, dt));
      o.require(r.max_violation <= eps, fmt("case %.0f eps %.2f: violation %.3g", double(c), eps, r.max_violation));
      worst_violation = std::max(worst_violation, r.max_violation / eps);
      if (oracle) {
        ++compared;
        worst_gap = std::min(worst_gap, r.lp_value - oracle->value);
        worst_true_gap = std::min(worst_true_gap, r.value - (oracle->value - eps));
        o.require(r.lp_value >= oracle->value - 1e-9,
                  fmt("case %.0f eps %.2f: LP value %.9f below oracle %.9f", double(c), eps, r.lp_value) +
                      fmt(" %.9f", oracle->value));
        o.require(r.value >= oracle->value - eps - 1e-9,
                  fmt("case %.0f eps %.2f: scheme value %.9f below oracle - eps", double(c), eps, r.value));
      }
      const std::size_t m_ante = inst.count(ConstraintMode::ExAnte);
      support.require(r.scheme.size() <= k + inst.constraints.size(),
                      fmt("case %.0f: support %.0f > k + m", double(c), double(r.scheme.size())));
      support.require(r.scheme.size() <= k + m_ante,
                      fmt("case %.0f: support %.0f > k + ex-ante rows", double(c), double(r.scheme.size())));
    }
    SolveOptions opt;
    try {
      at_005[c].bi = bi_criteria_solve(inst, 0.05, opt);
      at_005[c].ok = true;
    } catch (const Infeasible&) {
    }
  }
  if (o.pass) {
    o.detail = fmt("%.0f oracle comparisons, min(LP - oracle) = %.3g, min(value - (oracle - eps)) = %.3g", double(compared),
                   worst_gap, worst_true_gap) +
               fmt(", max violation/eps %.3f, slowest %.2f s", worst_violation, slowest);
  }
  return o;
}

// Criterion 7
Outcome single_criteria(const std::vector<RandomCase>& cases, const std::vector<CaseResult>& at_005) {
  Outcome o;
  std::size_t used = 0;
  double worst_violation = 0.0, worst_margin = 1e300;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    if (cases[c].slater < 0.1 || !at_005[c].ok) continue;
    const auto& inst = cases[c].instance;
    SolveReport r;
    try {
      r = single_criteria_solve(inst, 0.05, cases[c].slater);
    } catch (const std::exception& e) {
      o.require(false, fmt("case %.0f: ", double(c)) + e.what());
      continue;
    }
    ++used;
    worst_violation = std::max(worst_violation, r.max_violation);
    worst_margin = std::min(worst_margin, r.value - (at_005[c].bi.value - 0.05));
    o.require(r.max_violation <= 1e-9, fmt("case %.0f: violation %.3g", double(c), r.max_violation));
    o.require(r.value >= at_005[c].bi.value - 0.05 - 1e-9,
              fmt("case %.0f: value %.9f vs bi %.9f", double(c), r.value, at_005[c].bi.value));
  }
  o.require(used > 0, "no instance with a certified Slater margin >= 0.1");
  if (o.pass) {
    o.detail = fmt("%.0f instances, max violation %.2e, min(value - (bi - 0.05)) = %.4f", double(used), worst_violation,
                   worst_margin);
  }
  return o;
}

// Criterion 8 (second half)
void ex_post_support(const std::vector<RandomCase>& cases, Outcome& support, std::size_t& solved) {
  for (std::size_t c = 0; c < cases.size(); ++c) {
    ProblemInstance inst = cases[c].instance;
    if (inst.constraints.empty()) continue;
    for (auto& con : inst.constraints) con.mode = ConstraintMode::ExPost;
    try {
      auto r = bi_criteria_solve(inst, 0.05);
      ++solved;
      support.require(r.scheme.size() <= inst.k,
                      fmt("case %.0f: ex-post restricted support %.0f > k", double(c), double(r.scheme.size())));
    } catch (const Infeasible&) {
    }
  }
}

// Criterion 9
Outcome smoothing_sandwich() {
  Outcome o;
  Gen g(909);
  double worst_lo = 0.0, worst_hi = 0.0, worst_lip = 0.0;
  for (std::size_t k : {2, 3}) {
    for (double eps : {0.1, 0.01}) {
      for (int spec = 0; spec < 10; ++spec) {
        Posterior prior(g.interior_point(k, 0.05));
        ConstraintSpec c{g.grouped_kl(k, prior.vec()), 0.0, ConstraintMode::ExAnte};
        auto sm = smooth_constraint(c, eps, prior);
        for (int t = 0; t < 1000; ++t) {
          auto q = g.any_point(k);
          const double d = eval_constraint(c, q, prior) - sm(q);
          worst_lo = std::min(worst_lo, d);
          worst_hi = std::max(worst_hi, d - eps);
          auto a = g.any_point(k), b = g.any_point(k);
          if (g.coin()) {
            for (std::size_t w = 0; w < k; ++w) b[w] = 0.999 * a[w] + 0.001 * b[w];
          }
          const double dist = l1_distance(a, b);
          if (dist > 0.0) worst_lip = std::max(worst_lip, std::abs(sm(a) - sm(b)) / dist / sm.lipschitz_constant);
        }
      }
    }
  }
  o.require(worst_lo >= -1e-12, fmt("f - g reached %.3g", worst_lo));
  o.require(worst_hi <= 1e-12, fmt("f - g exceeded eps by %.3g", worst_hi));
  o.require(worst_lip <= 1.0 + 1e-9, fmt("Lipschitz certificate exceeded by factor %.6f", worst_lip));
  if (o.pass) o.detail = fmt("min(f-g) %.2e, max(f-g-eps) %.2e, max |dg|/(L |dq|) %.4f", worst_lo, worst_hi, worst_lip);
  return o;
}

// Criterion 10
Outcome relaxed_jensen() {
  Outcome o;
  Gen g(1010);
  double worst = 0.0;
  for (auto objective : {AuctionObjective::Welfare, AuctionObjective::Revenue}) {
    for (int s = 0; s < 20; ++s) {
      const std::size_t n = 1 + g.index(3), k = std::size_t{1} << n;
      AuctionSpec spec = g.auction(n, 3, objective);
      UtilitySpec u = to_max_linear(spec, k);
      auto rep = verify_jensen_factor(u, k, 100000, 2000 + s);
      worst = std::max(worst, rep.max_ratio);
      const std::string name = objective == AuctionObjective::Welfare ? "welfare" : "revenue";
      o.require(rep.max_ratio <= 2.0 + 1e-9, name + fmt(" spec %.0f: max ratio %.9f", double(s), rep.max_ratio));
    }
  }
  UtilitySpec inf{MaxLinearUtility{1, {{1.0, 0.0}, {0.0, 1.0}}}};
  std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
  const double eq = jensen_ratio(inf, 0.5, a, b);
  o.require(eq == 2.0, fmt("inf-norm equality case gave %.17g", eq));
  if (o.pass) o.detail = fmt("max ratio over 40 specs %.6f, equality case %.17g", worst, eq);
  return o;
}

// Criterion 11
Outcome example2_recipe() {
  Outcome o;
  Gen g(1111);
  const double eps = 0.02;
  double worst = 1e300;
  for (int t = 0; t < 10; ++t) {
    const std::size_t k = 2 + g.index(2);
    ProblemInstance inst;
    inst.k = k;
    inst.prior = Posterior(g.interior_point(k, 0.1));
    AuctionSpec spec = g.auction(k == 2 ? 1 : 2, 3, AuctionObjective::Welfare);
    if (k == 3) {
      spec.bidders[0].target = {1};
      spec.bidders[1].target = {2};
    }
    inst.utility = UtilitySpec{AuctionUtility{spec}};
    auto b = g.nonneg_vector(k, 1.0);
    double lo = 1e300;
    for (std::size_t w = 0; w < k; ++w) lo = std::min(lo, (b[w] += 0.5) * inst.prior[w]);
    inst.constraints.push_back(
        ConstraintSpec{NegMinWeightedConstraint{b}, -lo * g.uniform(0.2, 0.9), ConstraintMode::ExPost});
    auto scheme = example2_scheme(inst);
    const double post = utility_of(inst, scheme);
    ProblemInstance ante = inst;
    ante.constraints[0].mode = ConstraintMode::ExAnte;
    auto r = bi_criteria_solve(ante, eps);
    worst = std::min(worst, post - (0.5 * r.value - eps));
    o.require(verify_scheme(inst, scheme).valid, fmt("instance %.0f: recipe scheme is not valid", double(t)));
    o.require(post >= 0.5 * r.value - eps, fmt("instance %.0f: %.6f < half of %.6f - eps", double(t), post, r.value));
  }
  if (o.pass) o.detail = fmt("min(value - (bi/2 - eps)) = %.4f", worst);
  return o;
}

// Criterion 12
Outcome pooling_steps() {
  Outcome o;
  Gen g(1212);
  double worst_dev = 0.0, worst_rise = 0.0;
  std::size_t steps = 0;
  for (int run = 0; run < 100; ++run) {
    const std::size_t k = 2 + g.index(3);
    Posterior prior(g.interior_point(k, 0.05));
    auto scheme = g.scheme(prior, 2 + g.index(7));
    const std::size_t m = 1 + g.index(3);
    std::vector<ConstraintSpec> cs;
    for (std::size_t j = 0; j < m; ++j) {
      ConstraintSpec c;
      switch (g.index(4)) {
        case 0: c.kind = LinearConstraint{g.nonneg_vector(k)}; break;
        case 1: c.kind = NormDistanceConstraint{static_cast<NormOrder>(g.index(3))}; break;
        case 2: c.kind = NegMinWeightedConstraint{g.nonneg_vector(k, 2.0)}; break;
        default: c.kind = g.grouped_kl(k, prior.vec()); break;
      }
      const double e = expectation(scheme, c, prior);
      c.bound = std::max(e, eval_constraint(c, prior.vec(), prior)) + (g.coin() ? g.uniform(0.0, 0.05) : 0.0);
      cs.push_back(c);
    }
    PoolingTrace trace;
    PoolingOptions opt;
    opt.trace = &trace;
    SignalingScheme out;
    try {
      out = ex_ante_to_ex_post(scheme, cs, prior, opt);
    } catch (const std::exception& e) {
      o.require(false, fmt("run %.0f: ", double(run)) + e.what());
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) {
      o.require(trace.steps_per_constraint[j] + 1 <= std::max<std::size_t>(trace.support_at_start[j], 1),
                fmt("run %.0f constraint %.0f: %.0f steps", double(run), double(j), double(trace.steps_per_constraint[j])) +
                    fmt(" from support %.0f", double(trace.support_at_start[j])));
    }
    std::vector<double> prev = trace.initial_expectations;
    for (const auto& st : trace.steps) {
      ++steps;
      worst_dev = std::max(worst_dev, st.deviation);
      for (std::size_t j = 0; j < m; ++j) worst_rise = std::max(worst_rise, st.expectations[j] - prev[j]);
      prev = st.expectations;
    }
    o.require(verify_scheme(ProblemInstance{k, prior, UtilitySpec{MaxLinearUtility{1, {std::vector<double>(k, 1.0)}}},
                                            [&] {
                                              auto post = cs;
                                              for (auto& c : post) c.mode = ConstraintMode::ExPost;
                                              return post;
                                            }()},
                            out)
                  .valid,
              fmt("run %.0f: output is not ex-post valid", double(run)));
  }
  o.require(worst_dev <= 1e-9, fmt("barycenter drift %.3g", worst_dev));
  o.require(worst_rise <= 1e-9, fmt("an expectation rose by %.3g", worst_rise));
  if (o.pass) o.detail = fmt("%.0f steps, max drift %.2e, max rise %.2e", double(steps), worst_dev, worst_rise);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "Example 1 ex-ante/ex-post gap", example1_gap);
  report(2, "hypercube pooling loses 2^-m", hypercube_pooling);
  report(3, "Appendix E part 2 ratio M", appendix_e2);
  report(4, "Appendix E part 3 gap m+1", appendix_e3);
  report(5, "support-size lower bound instance", prop3);

  const auto cases = random_cases(50, 606);
  Outcome support;
  std::vector<CaseResult> at_005;
  report(6, "bi-criteria FPTAS contract", [&] { return fptas_contract(cases, support, at_005); });
  report(7, "single-criteria contract", [&] { return single_criteria(cases, at_005); });
  report(8, "support-size invariants", [&] {
    std::size_t solved = 0;
    ex_post_support(cases, support, solved);
    if (support.pass) support.detail = fmt("all bi-criteria supports <= k+m; %.0f ex-post restricted solves <= k", double(solved));
    return support;
  });
  report(9, "grouped KL smoothing sandwich", smoothing_sandwich);
  report(10, "relaxed Jensen factor 2", relaxed_jensen);
  report(11, "Example 2 vertex recipe", example2_recipe);
  report(12, "pooling step invariants", pooling_steps);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
