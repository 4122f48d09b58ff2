#include <benchmark/benchmark.h>

#include "persuade/auction.hpp"
#include "persuade/constraints.hpp"
#include "persuade/fixtures.hpp"
#include "persuade/geometry.hpp"
#include "persuade/objectives.hpp"
#include "persuade/persuasion_lp.hpp"
#include "persuade/solver.hpp"

using namespace persuade;

namespace {

ProblemInstance kl_instance(std::size_t k) {
  ProblemInstance inst;
  inst.k = k;
  inst.prior = Posterior::uniform(k);
  MaxLinearUtility u;
  for (std::size_t w = 0; w < k; ++w) u.functionals.push_back(Posterior::unit(k, w).vec());
  inst.utility = UtilitySpec{u};
  GroupedKlConstraint kl;
  for (std::size_t w = 0; w < k; ++w) {
    kl.partition.push_back({w});
    kl.references.push_back(1.0 / static_cast<double>(k));
  }
  inst.constraints.push_back(ConstraintSpec{kl, 0.3, ConstraintMode::ExAnte});
  return inst;
}

void BM_BuildGrid(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto N = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto grid = build_grid_with_denominator(k, N);
    benchmark::DoNotOptimize(grid.num_cells());
  }
  state.counters["vertices"] = static_cast<double>(lattice_point_count(k, N));
}
BENCHMARK(BM_BuildGrid)->Args({2, 1000})->Args({3, 100})->Args({3, 400})->Args({4, 40});

void BM_UpperApprox(benchmark::State& state) {
  auto inst = kl_instance(3);
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto gu = build_upper_approx(inst.utility, inst.k, eps, utility_lipschitz(inst.utility));
    benchmark::DoNotOptimize(gu.cell_values.data());
  }
}
BENCHMARK(BM_UpperApprox)->Arg(10)->Arg(50);

void BM_SolvePersuasionLp(benchmark::State& state) {
  auto inst = kl_instance(3);
  const double eps = 1.0 / static_cast<double>(state.range(0));
  auto gu = build_upper_approx(inst.utility, inst.k, eps / 2.0, utility_lipschitz(inst.utility));
  std::vector<SmoothedConstraint> cs = {smooth_constraint(inst.constraints[0], eps / 2.0, inst.prior)};
  auto lp = build_persuasion_lp(gu, cs, eps / 2.0, inst.prior);
  for (auto _ : state) {
    auto sol = solve_lp(lp);
    benchmark::DoNotOptimize(sol.value);
  }
  state.counters["columns"] = static_cast<double>(gu.num_points());
}
BENCHMARK(BM_SolvePersuasionLp)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BiCriteria(benchmark::State& state) {
  auto inst = kl_instance(static_cast<std::size_t>(state.range(0)));
  const double eps = 1.0 / static_cast<double>(state.range(1));
  for (auto _ : state) {
    auto r = bi_criteria_solve(inst, eps);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_BiCriteria)->Args({2, 50})->Args({3, 10})->Args({3, 40})->Unit(benchmark::kMillisecond);

void BM_Pooling(benchmark::State& state) {
  auto fx = build_fixture(FixtureId{FixtureKind::AppE1, 0.1, 2, static_cast<std::size_t>(state.range(0))});
  auto full = SignalingScheme::full_revelation(fx.instance.prior);
  for (auto _ : state) {
    auto out = ex_ante_to_ex_post(full, fx.instance.constraints, fx.instance.prior);
    benchmark::DoNotOptimize(out.size());
  }
}
BENCHMARK(BM_Pooling)->Arg(2)->Arg(3)->Arg(4);

void BM_AuctionUtility(benchmark::State& state) {
  AuctionSpec spec;
  for (int i = 0; i < state.range(0); ++i) {
    Bidder b;
    b.types = {{0.5, 0.2, 0.9}, {0.3, 0.4, 0.6}, {0.2, 0.1, 1.0}};
    spec.bidders.push_back(b);
  }
  const std::size_t k = std::size_t{1} << spec.n();
  const auto q = Posterior::uniform(k).vec();
  for (auto _ : state) {
    auto est = auction_utility(spec, q);
    benchmark::DoNotOptimize(est.value);
  }
}
BENCHMARK(BM_AuctionUtility)->Arg(2)->Arg(3)->Arg(4);

}  // namespace
BENCHMARK_MAIN();
