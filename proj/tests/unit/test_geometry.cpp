#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "persuade/errors.hpp"
#include "persuade/geometry.hpp"
#include "support/generators.hpp"

using namespace persuade;
using persuade::testing::Gen;
using Rational = boost::multiprecision::cpp_rational;

namespace {

// All compositions of N into k nonnegative parts.
void compositions(std::size_t k, std::size_t N, std::vector<std::size_t>& cur, std::set<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == k) {
    std::size_t used = 0;
    for (auto x : cur) used += x;
    cur.push_back(N - used);
    out.insert(cur);
    cur.pop_back();
    return;
  }
  std::size_t used = 0;
  for (auto x : cur) used += x;
  for (std::size_t x = 0; x + used <= N; ++x) {
    cur.push_back(x);
    compositions(k, N, cur, out);
    cur.pop_back();
  }
}

// Exact (k-1)-volume of a cell in the chart (q_0..q_{k-2}) as |det| / (k-1)!.
Rational exact_cell_volume(const SimplexGrid& grid, std::size_t c) {
  const std::size_t k = grid.dim();
  const std::size_t d = k - 1;
  auto ids = grid.cell(c);
  auto base = grid.lattice(ids[0]);
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d));
  for (std::size_t r = 0; r < d; ++r) {
    auto v = grid.lattice(ids[r + 1]);
    for (std::size_t col = 0; col < d; ++col) {
      m[r][col] = Rational(static_cast<long long>(v[col]) - static_cast<long long>(base[col])) /
                  Rational(grid.denominator());
    }
  }
  Rational det = 1;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && m[piv][col] == 0) ++piv;
    if (piv == d) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < d; ++r) {
      Rational f = m[r][col] / m[col][col];
      for (std::size_t cc = col; cc < d; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  Rational fact = 1;
  for (std::size_t i = 2; i <= d; ++i) fact *= static_cast<long long>(i);
  return (det < 0 ? Rational(-det) : det) / fact;
}

// Minimizes ||q - x|| over the segment [(lo, 1-lo), (1-lo, lo)] by golden-section search.
std::vector<double> segment_projection_oracle(std::vector<double> q, double lo) {
  auto dist = [&](double t) {
    double a = t - q[0], b = (1.0 - t) - q[1];
    return a * a + b * b;
  };
  double a = lo, b = 1.0 - lo;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (dist(x1) < dist(x2)) b = x2;
    else a = x1;
  }
  double t = 0.5 * (a + b);
  return {t, 1.0 - t};
}

double l2(std::span<const double> a, std::span<const double> b) { return l2_distance(a, b); }

}  // namespace

TEST(Grid, OneDimensionalTwoCells) {
  SimplexGrid g = build_grid(2, 1.0);
  EXPECT_EQ(g.denominator(), 2u);
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_cells(), 2u);
  std::set<std::vector<double>> verts;
  for (std::size_t i = 0; i < g.num_vertices(); ++i) verts.insert({g.vertex(i)[0], g.vertex(i)[1]});
  EXPECT_EQ(verts, (std::set<std::vector<double>>{{0, 1}, {0.5, 0.5}, {1, 0}}));
}

TEST(Grid, WholeSimplexForLargeDelta) {
  SimplexGrid g = build_grid(3, 2.0);
  EXPECT_EQ(g.denominator(), 1u);
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_cells(), 1u);
}

TEST(Grid, LatticeEnumerationMatchesCompositionOracle) {
  for (std::size_t k = 2; k <= 5; ++k) {
    for (std::size_t N = 1; N <= 6; ++N) {
      SimplexGrid g = build_grid_with_denominator(k, N);
      std::set<std::vector<std::size_t>> expected, got;
      std::vector<std::size_t> cur;
      compositions(k, N, cur, expected);
      for (std::size_t i = 0; i < g.num_vertices(); ++i) {
        auto n = g.lattice(i);
        got.insert(n);
        EXPECT_EQ(g.vertex_index(n), i);
        for (std::size_t w = 0; w < k; ++w) EXPECT_EQ(g.vertex(i)[w], static_cast<double>(n[w]) / N);
      }
      EXPECT_EQ(got, expected) << "k=" << k << " N=" << N;
      EXPECT_EQ(g.num_vertices(), lattice_point_count(k, N));
    }
  }
}

TEST(Grid, FifteenVerticesAndExactVolumeAtN4) {
  SimplexGrid g = build_grid_with_denominator(3, 4);
  EXPECT_EQ(g.num_vertices(), 15u);
  Rational total = 0;
  for (std::size_t c = 0; c < g.num_cells(); ++c) total += exact_cell_volume(g, c);
  EXPECT_EQ(total, Rational(1, 2));
}

TEST(Grid, CellsTileTheSimplexExactly) {
  for (std::size_t k = 2; k <= 5; ++k) {
    for (std::size_t N : {1u, 2u, 3u, 5u}) {
      SimplexGrid g = build_grid_with_denominator(k, N);
      Rational total = 0;
      double total_d = 0.0;
      for (std::size_t c = 0; c < g.num_cells(); ++c) {
        Rational v = exact_cell_volume(g, c);
        EXPECT_GT(v, 0) << "degenerate cell";
        total += v;
        total_d += g.cell_volume(c);
      }
      Rational fact = 1;
      for (std::size_t i = 2; i < k; ++i) fact *= static_cast<long long>(i);
      EXPECT_EQ(total, Rational(1) / fact) << "k=" << k << " N=" << N;
      EXPECT_NEAR(total_d, (Rational(1) / fact).convert_to<double>(), 1e-9 * total_d);
      EXPECT_EQ(g.num_cells(), static_cast<std::size_t>(std::pow(N, k - 1)));
    }
  }
}

TEST(Grid, DiameterBound) {
  for (std::size_t k = 2; k <= 4; ++k) {
    for (double delta : {0.5, 0.2, 0.13}) {
      SimplexGrid g = build_grid(k, delta);
      EXPECT_LE(g.measured_max_diameter(), delta + 1e-12);
      EXPECT_EQ(g.requested_diameter(), delta);
      double worst = 0.0;
      for (std::size_t c = 0; c < g.num_cells(); ++c) {
        auto ids = g.cell(c);
        for (auto a : ids)
          for (auto b : ids) worst = std::max(worst, l1_distance(g.vertex(a), g.vertex(b)));
      }
      EXPECT_NEAR(worst, g.measured_max_diameter(), 1e-15);
    }
  }
  EXPECT_EQ(build_grid(3, 0.1).denominator(), 20u);
  EXPECT_EQ(kuhn_diameter_units(2), 2u);
  EXPECT_EQ(kuhn_diameter_units(3), 2u);
}

TEST(Grid, RandomPointsAreCovered) {
  Gen gen(17);
  for (std::size_t k = 2; k <= 4; ++k) {
    SimplexGrid g = build_grid_with_denominator(k, 7);
    for (int t = 0; t < 10000 / 3; ++t) {
      auto q = gen.any_point(k);
      auto cells = g.locate(q, 1e-9);
      ASSERT_FALSE(cells.empty());
      for (auto c : cells) {
        auto bc = g.barycentric(c, q);
        for (double x : bc) EXPECT_GE(x, -1e-9);
        std::vector<double> back(k, 0.0);
        auto ids = g.cell(c);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t w = 0; w < k; ++w) back[w] += bc[i] * g.vertex(ids[i])[w];
        EXPECT_LE(linf_distance(back, q), 1e-12);
      }
    }
  }
}

TEST(Grid, LocateFindsAllIncidentCellsOfAVertex) {
  SimplexGrid g = build_grid_with_denominator(3, 5);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::set<std::size_t> expected;
    for (std::size_t c = 0; c < g.num_cells(); ++c) {
      for (auto id : g.cell(c))
        if (id == v) expected.insert(c);
    }
    auto got = g.locate(g.vertex(v));
    EXPECT_EQ(std::set<std::size_t>(got.begin(), got.end()), expected);
  }
}

TEST(Grid, VertexCapIsEnforced) {
  EXPECT_THROW(build_grid_with_denominator(3, 100, 50), ResourceLimit);
  setenv("PERSUADE_GRID_CAP", "40", 1);
  EXPECT_EQ(effective_vertex_cap(), 40u);
  EXPECT_THROW(build_grid_with_denominator(3, 10), ResourceLimit);
  unsetenv("PERSUADE_GRID_CAP");
  EXPECT_EQ(effective_vertex_cap(), kDefaultVertexCap);
  EXPECT_THROW(build_grid(2, 0.0), InvalidInput);
  EXPECT_THROW(build_grid(1, 0.5), InvalidInput);
}

TEST(Projection, CenterIsFixed) {
  for (std::size_t k = 2; k <= 5; ++k) {
    std::vector<double> c(k, 1.0 / k);
    for (double e : {0.1, 1.0, 3.0}) EXPECT_LE(linf_distance(project_to_contraction(c, e), c), 1e-15);
  }
}

TEST(Projection, IdentityInsideContraction) {
  Gen gen(2);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 2 + gen.index(4);
    const double e = gen.uniform(0.05, 2.0);
    const double s = 1.0 / (1.0 + e * e);
    auto q = gen.simplex_point(k);
    for (double& x : q) x = 1.0 / k + s * (x - 1.0 / k);
    EXPECT_LE(linf_distance(project_to_contraction(q, e), q), 1e-15);
  }
}

TEST(Projection, SegmentEndpoint) {
  std::vector<double> q = {1.0, 0.0};
  auto p = project_to_contraction(q, 1.0);
  EXPECT_NEAR(p[0], 0.75, 1e-15);
  EXPECT_NEAR(p[1], 0.25, 1e-15);
  auto oracle = segment_projection_oracle(q, 0.25);
  EXPECT_NEAR(p[0], oracle[0], 1e-9);
}

TEST(Projection, MatchesOneDimensionalOracle) {
  Gen gen(23);
  for (int t = 0; t < 300; ++t) {
    const double e = gen.uniform(0.05, 2.0);
    const double lo = (1.0 - 1.0 / (1.0 + e * e)) / 2.0;
    auto q = gen.any_point(2);
    auto p = project_to_contraction(q, e);
    auto o = segment_projection_oracle(q, lo);
    EXPECT_NEAR(p[0], o[0], 1e-9);
  }
}

TEST(Projection, NonexpansiveAndCloseToInput) {
  Gen gen(29);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t k = 2 + gen.index(4);
    const double e = gen.uniform(0.01, 1.0);
    auto a = gen.any_point(k);
    auto b = gen.any_point(k);
    auto pa = project_to_contraction(a, e);
    auto pb = project_to_contraction(b, e);
    EXPECT_LE(l2(pa, pb), l2(a, b) + 1e-14);
    EXPECT_LE(l1_distance(pa, pb), l1_distance(a, b) + 1e-14);
    // diameter of the simplex in l2 is sqrt(2)
    EXPECT_LE(l2(a, pa), e * e * std::sqrt(2.0) + 1e-15);
    double sum = 0.0;
    for (double x : pa) {
      EXPECT_GE(x, (1.0 - 1.0 / (1.0 + e * e)) / k - 1e-15);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
  }
}
