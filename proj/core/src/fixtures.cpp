#include "persuade/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "persuade/errors.hpp"
#include "persuade/geometry.hpp"
#include "persuade/model.hpp"

namespace persuade {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t parse_size(const std::string& s, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("fixture id '" + text + "': '" + s + "' is not a nonnegative integer");
  }
  if (pos != s.size() || s.empty() || s[0] == '-') {
    throw InvalidInput("fixture id '" + text + "': '" + s + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("fixture id '" + text + "': '" + s + "' is not a number");
  }
  if (pos != s.size()) throw InvalidInput("fixture id '" + text + "': '" + s + "' is not a number");
  return v;
}

ConstraintSpec linear(std::vector<double> coeffs, double bound, ConstraintMode mode) {
  return ConstraintSpec{LinearConstraint{std::move(coeffs)}, bound, mode};
}

UtilitySpec inf_norm(std::size_t k) {
  MaxLinearUtility u;
  for (std::size_t w = 0; w < k; ++w) {
    std::vector<double> a(k, 0.0);
    a[w] = 1.0;
    u.functionals.push_back(std::move(a));
  }
  return UtilitySpec{std::move(u)};
}

ProblemInstance with_mode(ProblemInstance inst, ConstraintMode mode) {
  for (auto& c : inst.constraints) c.mode = mode;
  return inst;
}

std::vector<std::vector<double>> prop3_points(std::size_t k, std::size_t m) {
  std::vector<std::vector<double>> d(m, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < m; ++i) d[i][i % k] = 1.0 + static_cast<double>(i / k);
  std::vector<double> mean(k, 0.0);
  for (const auto& v : d) {
    for (std::size_t w = 0; w < k; ++w) mean[w] += v[w] / static_cast<double>(m);
  }
  double spread = 0.0;
  for (const auto& v : d) spread = std::max(spread, linf_distance(v, mean));
  const double rho = spread > 0.0 ? 1.0 / (2.0 * static_cast<double>(k) * spread) : 0.0;
  std::vector<std::vector<double>> q(m, std::vector<double>(k));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t w = 0; w < k; ++w) q[i][w] = 1.0 / static_cast<double>(k) + rho * (d[i][w] - mean[w]);
  }
  return q;
}

class Checks {
 public:
  void near(const std::string& name, double expected, double actual, double tol) {
    add(name, expected, actual, std::abs(expected - actual) <= tol);
  }
  void truth(const std::string& name, bool ok) { add(name, 1.0, ok ? 1.0 : 0.0, ok); }
  void add(const std::string& name, double expected, double actual, bool pass) {
    checks_.push_back({name, expected, actual, pass});
  }
  std::vector<FixtureCheck> take() { return std::move(checks_); }

 private:
  std::vector<FixtureCheck> checks_;
};

std::vector<std::vector<double>> line_points(std::initializer_list<double> q1s) {
  std::vector<std::vector<double>> pts;
  for (double x : q1s) pts.push_back({1.0 - x, x});
  return pts;
}

}  // namespace

FixtureId FixtureId::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInput("fixture id '" + text + "': expected <name>:<params>");
  const std::string name = text.substr(0, colon);
  const std::string params = text.substr(colon + 1);
  FixtureId id;
  if (name == "example1") {
    id.kind = FixtureKind::Example1;
    id.eps0 = parse_real(params, text);
  } else if (name == "prop3") {
    id.kind = FixtureKind::Prop3;
    const auto comma = params.find(',');
    if (comma == std::string::npos) throw InvalidInput("fixture id '" + text + "': expected prop3:<k>,<m>");
    id.k = parse_size(params.substr(0, comma), text);
    id.m = parse_size(params.substr(comma + 1), text);
  } else if (name == "appE1") {
    id.kind = FixtureKind::AppE1;
    id.m = parse_size(params, text);
  } else if (name == "appE2") {
    id.kind = FixtureKind::AppE2;
    id.M = parse_real(params, text);
  } else if (name == "appE3") {
    id.kind = FixtureKind::AppE3;
    id.m = parse_size(params, text);
  } else {
    throw InvalidInput("fixture id '" + text + "': unknown fixture '" + name + "'");
  }
  id.validate();
  return id;
}

std::string FixtureId::to_string() const {
  switch (kind) {
    case FixtureKind::Example1: return "example1:" + num(eps0);
    case FixtureKind::Prop3: return "prop3:" + std::to_string(k) + "," + std::to_string(m);
    case FixtureKind::AppE1: return "appE1:" + std::to_string(m);
    case FixtureKind::AppE2: return "appE2:" + num(M);
    case FixtureKind::AppE3: return "appE3:" + std::to_string(m);
  }
  return "unknown";
}

void FixtureId::validate() const {
  switch (kind) {
    case FixtureKind::Example1:
      if (!(eps0 > 0.0 && eps0 < 0.5)) throw InvalidInput("example1: eps0 must lie in (0, 1/2), got " + num(eps0));
      break;
    case FixtureKind::Prop3:
      if (k < 2 || k > 8) throw InvalidInput("prop3: k must lie in [2, 8], got " + std::to_string(k));
      if (m < 1 || m > 8) throw InvalidInput("prop3: m must lie in [1, 8], got " + std::to_string(m));
      break;
    case FixtureKind::AppE1:
      if (m < 1 || m > 4) throw InvalidInput("appE1: m must lie in [1, 4], got " + std::to_string(m));
      break;
    case FixtureKind::AppE2:
      if (!(M >= 1.0) || !std::isfinite(M)) throw InvalidInput("appE2: M must be finite and >= 1, got " + num(M));
      break;
    case FixtureKind::AppE3:
      if (m < 1 || m > 8) throw InvalidInput("appE3: m must lie in [1, 8], got " + std::to_string(m));
      break;
  }
}

Fixture build_fixture(const FixtureId& id) {
  id.validate();
  Fixture fx;
  fx.id = id;
  ProblemInstance& inst = fx.instance;
  switch (id.kind) {
    case FixtureKind::Example1: {
      inst.k = 2;
      inst.prior = Posterior::uniform(2);
      inst.utility = UtilitySpec{MaxLinearUtility{1, {{0.0, 0.0}, {-1.0, 1.0}}}};
      inst.constraints.push_back(linear({0.0, 1.0}, 0.5 + id.eps0, ConstraintMode::ExPost));
      fx.ex_ante_opt = 0.5;
      fx.ex_post_opt = 2.0 * id.eps0 / (1.0 + 2.0 * id.eps0);
      break;
    }
    case FixtureKind::Prop3: {
      const std::size_t k = id.k, m = id.m;
      inst.k = k;
      inst.prior = Posterior::uniform(k);
      auto q = prop3_points(k, m);
      std::vector<std::vector<double>> special = q;
      for (std::size_t j = 0; j < k; ++j) special.push_back(Posterior::unit(k, j).vec());
      double min_dist = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < special.size(); ++a) {
        for (std::size_t b = a + 1; b < special.size(); ++b) min_dist = std::min(min_dist, l1_distance(special[a], special[b]));
      }
      const double r = 0.5 * min_dist;
      PiecewiseConstantUtility u;
      Piece whole;
      for (std::size_t j = 0; j < k; ++j) whole.vertices.push_back(Posterior::unit(k, j).vec());
      whole.value = 0.0;
      u.pieces.push_back(whole);
      for (const auto& qi : q) u.pieces.push_back(Piece{{qi}, 1.0});
      for (std::size_t j = 0; j < k; ++j) u.pieces.push_back(Piece{{Posterior::unit(k, j).vec()}, 0.5});
      inst.utility = UtilitySpec{std::move(u)};
      for (const auto& qi : q) {
        inst.constraints.push_back(
            ConstraintSpec{BumpConstraint{qi, r}, 1.0 / (2.0 * static_cast<double>(m)), ConstraintMode::ExAnte});
      }
      std::vector<Posterior> support;
      std::vector<double> probs;
      for (const auto& qi : q) {
        support.emplace_back(qi);
        probs.push_back(1.0 / (2.0 * static_cast<double>(m)));
      }
      for (std::size_t j = 0; j < k; ++j) {
        support.push_back(Posterior::unit(k, j));
        probs.push_back(1.0 / (2.0 * static_cast<double>(k)));
      }
      fx.reference = SignalingScheme(std::move(support), std::move(probs));
      fx.ex_ante_opt = 0.75;
      break;
    }
    case FixtureKind::AppE1: {
      const std::size_t k = std::size_t{1} << id.m;
      inst.k = k;
      inst.prior = Posterior::uniform(k);
      inst.utility = inf_norm(k);
      for (std::size_t i = 0; i < id.m; ++i) {
        std::vector<double> coeffs(k);
        for (std::size_t w = 0; w < k; ++w) coeffs[w] = static_cast<double>((w >> i) & 1U);
        inst.constraints.push_back(linear(std::move(coeffs), 0.5, ConstraintMode::ExPost));
      }
      fx.reference = SignalingScheme::full_revelation(inst.prior);
      fx.ex_ante_opt = 1.0;
      fx.ex_post_opt = std::ldexp(1.0, -static_cast<int>(id.m));
      break;
    }
    case FixtureKind::AppE2: {
      const double M = id.M;
      inst.k = 2;
      inst.prior = Posterior::uniform(2);
      inst.utility = UtilitySpec{MaxLinearUtility{1, {{1.0 / M, 1.0 / M}, {(2.0 - M) / M, 1.0}, {1.0, (2.0 - M) / M}}}};
      inst.constraints.push_back(linear({0.0, 1.0}, 0.5, ConstraintMode::ExPost));
      fx.ex_ante_opt = 1.0;
      fx.ex_post_opt = 1.0 / M;
      break;
    }
    case FixtureKind::AppE3: {
      const std::size_t k = id.m + 1;
      inst.k = k;
      inst.prior = Posterior::uniform(k);
      inst.utility = inf_norm(k);
      for (std::size_t i = 0; i < id.m; ++i) {
        std::vector<double> coeffs(k, 0.0);
        coeffs[i] = 1.0;
        inst.constraints.push_back(linear(std::move(coeffs), 1.0 / static_cast<double>(k), ConstraintMode::ExPost));
      }
      fx.ex_ante_opt = 1.0;
      fx.ex_post_opt = 1.0 / static_cast<double>(k);
      break;
    }
  }
  inst.validate();
  return fx;
}

PairSelector bit_pairing_selector(std::size_t m) {
  return [m](std::size_t j, const std::vector<std::vector<double>>& points, const std::vector<double>& f_values,
             const std::vector<std::size_t>& S, const std::vector<std::size_t>& T) -> std::pair<std::size_t, std::size_t> {
    if (j < m) {
      const std::size_t flip = std::size_t{1} << j;
      for (std::size_t t : T) {
        const auto& pt = points[t];
        for (std::size_t s : S) {
          const auto& ps = points[s];
          if (ps.size() != pt.size()) continue;
          bool match = true;
          for (std::size_t w = 0; w < pt.size() && match; ++w) {
            const std::size_t partner = w ^ flip;
            match = partner < pt.size() && std::abs(ps[w] - pt[partner]) <= 1e-9;
          }
          if (match) return {s, t};
        }
      }
    }
    std::size_t t = T.front(), s = S.front();
    for (auto i : T) {
      if (f_values[i] > f_values[t]) t = i;
    }
    for (auto i : S) {
      if (f_values[i] < f_values[s]) s = i;
    }
    return {s, t};
  };
}

FixtureReport verify_fixture(const FixtureId& id) {
  Fixture fx = build_fixture(id);
  const ProblemInstance& inst = fx.instance;
  FixtureReport rep;
  rep.id = id;
  Checks checks;
  switch (id.kind) {
    case FixtureKind::Example1: {
      auto pts = line_points({0.0, 0.5, 0.5 + id.eps0, 1.0});
      OracleOptions exact;
      exact.exact = true;
      SolveReport ante = oracle_solve(with_mode(inst, ConstraintMode::ExAnte), pts, exact);
      SolveReport post = oracle_solve(inst, pts, exact);
      checks.near("ex-ante optimum", *fx.ex_ante_opt, ante.value, 1e-9);
      checks.near("ex-post optimum", *fx.ex_post_opt, post.value, 1e-9);
      checks.truth("ex-post scheme valid", verify_scheme(inst, post.scheme).valid);
      rep.result_scheme = post.scheme;
      break;
    }
    case FixtureKind::Prop3: {
      const SignalingScheme& ref = *fx.reference;
      VerifyReport v = verify_scheme(inst, ref);
      checks.truth("reference scheme valid", v.valid);
      checks.near("reference value", 0.75, v.utility, 1e-12);
      checks.add("support size", static_cast<double>(id.k + id.m), static_cast<double>(ref.size()),
                 ref.size() == id.k + id.m);
      bool perturb_ok = true;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        for (double delta : {-1e-3, 1e-3}) {
          std::vector<double> probs = ref.probs();
          probs[i] = std::max(0.0, probs[i] + delta);
          double total = 0.0;
          for (double p : probs) total += p;
          for (double& p : probs) p /= total;
          VerifyReport pv = verify_scheme(inst, SignalingScheme(ref.support(), probs));
          if (pv.valid && pv.utility > 0.75 - 1e-12) perturb_ok = false;
        }
      }
      checks.truth("single-weight perturbations are invalid or worse", perturb_ok);
      rep.result_scheme = ref;
      break;
    }
    case FixtureKind::AppE1: {
      SignalingScheme scheme = *fx.reference;
      ProblemInstance ante = with_mode(inst, ConstraintMode::ExAnte);
      checks.near("full-revelation value", *fx.ex_ante_opt, verify_scheme(ante, scheme).utility, 1e-12);
      checks.truth("full revelation satisfies the ex-ante constraints", verify_scheme(ante, scheme).valid);
      PoolingOptions opts;
      opts.selector = bit_pairing_selector(id.m);
      bool halves = true;
      for (std::size_t i = 0; i < id.m; ++i) {
        std::span<const ConstraintSpec> prefix(inst.constraints.data(), i + 1);
        scheme = ex_ante_to_ex_post(scheme, prefix, inst.prior, opts);
        for (const auto& p : scheme.support()) {
          halves = halves && std::abs(eval_constraint(inst.constraints[i], p.weights(), inst.prior) - 0.5) <= 1e-9;
        }
      }
      checks.truth("every posterior has f_i = 1/2 after run i", halves);
      VerifyReport v = verify_scheme(inst, scheme);
      checks.near("post-pooling value", *fx.ex_post_opt, v.utility, 1e-9);
      checks.truth("pooled scheme valid ex post", v.valid);
      checks.add("pooled support size", 1.0, static_cast<double>(scheme.size()), scheme.size() == 1);
      checks.near("pooled posterior is the prior", 0.0, linf_distance(scheme.support().front().weights(),
                                                                       inst.prior.weights()), 1e-9);
      rep.result_scheme = scheme;
      break;
    }
    case FixtureKind::AppE2: {
      auto pts = line_points({0.0, 0.25, 0.5, 0.75, 1.0});
      SolveReport ante = oracle_solve(with_mode(inst, ConstraintMode::ExAnte), pts);
      SolveReport post = oracle_solve(inst, pts);
      checks.near("ex-ante optimum", *fx.ex_ante_opt, ante.value, 1e-9);
      checks.near("ex-post optimum", *fx.ex_post_opt, post.value, 1e-9);
      checks.near("gap", id.M, ante.value / post.value, 1e-9);
      rep.result_scheme = post.scheme;
      break;
    }
    case FixtureKind::AppE3: {
      SimplexGrid grid = build_grid_with_denominator(inst.k, inst.k);
      SolveReport ante = grid_solve(with_mode(inst, ConstraintMode::ExAnte), grid);
      SolveReport post = grid_solve(inst, grid);
      checks.near("ex-ante optimum", *fx.ex_ante_opt, ante.value, 1e-9);
      checks.near("ex-post optimum", *fx.ex_post_opt, post.value, 1e-9);
      checks.near("gap", static_cast<double>(inst.k), ante.value / post.value, 1e-6);
      VerifyReport full = verify_scheme(with_mode(inst, ConstraintMode::ExAnte),
                                        SignalingScheme::full_revelation(inst.prior));
      VerifyReport none = verify_scheme(inst, SignalingScheme::no_revelation(inst.prior));
      checks.truth("full revelation valid ex ante", full.valid);
      checks.near("full revelation value", 1.0, full.utility, 1e-12);
      checks.truth("no revelation valid ex post", none.valid);
      checks.near("no revelation value", *fx.ex_post_opt, none.utility, 1e-12);
      rep.result_scheme = post.scheme;
      break;
    }
  }
  rep.checks = checks.take();
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const FixtureCheck& c) { return c.pass; });
  return rep;
}

Prop3Sample sample_prop3_schemes(const Fixture& fixture, std::size_t valid_target, std::uint64_t seed) {
  if (fixture.id.kind != FixtureKind::Prop3) throw InvalidInput("sample_prop3_schemes: fixture is not prop3");
  const ProblemInstance& inst = fixture.instance;
  const std::size_t k = inst.k;
  std::vector<std::vector<double>> special;
  for (const auto& p : fixture.reference->support()) special.push_back(p.vec());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  Prop3Sample out;
  const std::size_t max_draws = std::max<std::size_t>(valid_target * 1000, 1000);
  while (out.valid < valid_target && out.drawn < max_draws) {
    ++out.drawn;
    // Mass alpha on the special points, the rest on one residual point that
    // restores the barycenter.
    const double alpha = unif(rng);
    std::vector<double> w(special.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = unif(rng) < 0.3 ? 0.0 : expo(rng);
      total += w[i];
    }
    if (total <= 0.0) continue;
    for (double& x : w) x /= total;
    std::vector<double> residual(k);
    bool inside = true;
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < special.size(); ++i) s += w[i] * special[i][c];
      residual[c] = (inst.prior[c] - alpha * s) / (1.0 - alpha);
      if (residual[c] < -1e-12) inside = false;
    }
    if (!inside) continue;
    std::vector<Posterior> support;
    std::vector<double> probs;
    for (std::size_t i = 0; i < special.size(); ++i) {
      if (w[i] <= 0.0) continue;
      support.emplace_back(special[i]);
      probs.push_back(alpha * w[i]);
    }
    double rsum = 0.0;
    for (double& x : residual) rsum += (x = std::max(0.0, x));
    for (double& x : residual) x /= rsum;
    support.emplace_back(residual);
    probs.push_back(1.0 - alpha);
    SignalingScheme scheme(std::move(support), std::move(probs));
    VerifyReport v = verify_scheme(inst, scheme);
    if (!v.valid) continue;
    ++out.valid;
    out.max_value = std::max(out.max_value, v.utility);
  }
  return out;
}

}  // namespace persuade
