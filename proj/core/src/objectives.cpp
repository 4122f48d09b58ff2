#include "persuade/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "persuade/auction.hpp"
#include "persuade/errors.hpp"
#include "persuade/model.hpp"
#include "piece_geometry.hpp"

namespace persuade {

namespace {

double functional_spread(const MaxLinearUtility& u) {
  double best = 0.0;
  for (const auto& a : u.functionals) {
    auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    best = std::max(best, *hi - *lo);
  }
  return best;
}

struct PointKey {
  long long a, b;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    return std::hash<long long>()(k.a) ^ (std::hash<long long>()(k.b) * 0x9e3779b97f4a7c15ULL);
  }
};

// Splits every grid cell along the piece boundaries (k = 2 or 3).
void refine(GriddedUtility& gu, const PiecewiseConstantUtility& pwc) {
  const SimplexGrid& grid = gu.grid;
  const std::size_t k = grid.dim();
  if (k != 2 && k != 3) {
    throw InvalidInput("build_upper_approx: piecewise constant utilities are supported for k = 2 or 3, got k = " +
                       std::to_string(k));
  }
  std::vector<detail::ChartPolytope> polys;
  for (std::size_t p = 0; p < pwc.pieces.size(); ++p) {
    polys.push_back(detail::chart_polytope(pwc.pieces[p], k));
    if (!polys.back().full_dimensional()) {
      throw InvalidInput("build_upper_approx: piece " + std::to_string(p) +
                         " is lower-dimensional; gridding needs full-dimensional pieces");
    }
  }
  const double N = static_cast<double>(grid.denominator());
  const std::size_t nv = grid.num_vertices();
  std::unordered_map<PointKey, std::uint32_t, PointKeyHash> extra_ids;

  auto point_id = [&](const detail::Vec2& x) -> std::uint32_t {
    auto q = detail::unchart(x, k);
    // Snap to a lattice vertex when every coordinate is a multiple of 1/N.
    std::vector<std::size_t> n(k);
    bool lattice = true;
    long long total = 0;
    for (std::size_t j = 0; j < k && lattice; ++j) {
      double t = q[j] * N;
      long long r = std::llround(t);
      if (std::abs(t - static_cast<double>(r)) > 1e-9 || r < 0) lattice = false;
      n[j] = static_cast<std::size_t>(std::max(0LL, r));
      total += r;
    }
    if (lattice && total == static_cast<long long>(grid.denominator())) {
      return static_cast<std::uint32_t>(grid.vertex_index(n));
    }
    PointKey key{std::llround(x[0] * 1e12), std::llround(x[1] * 1e12)};
    auto it = extra_ids.find(key);
    if (it != extra_ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(nv + gu.extra_points.size() / k);
    for (double v : q) gu.extra_points.push_back(std::max(0.0, v));
    extra_ids.emplace(key, id);
    return id;
  };

  gu.refined = true;
  gu.sub_offset.assign(1, 0);
  gu.cell_values.assign(grid.num_cells(), 0.0);
  for (std::size_t c = 0; c < grid.num_cells(); ++c) {
    auto ids = grid.cell(c);
    std::vector<detail::Vec2> cell_poly;
    for (auto id : ids) cell_poly.push_back(detail::chart(grid.vertex(id)));
    if (k == 2) {
      if (cell_poly[0][0] > cell_poly[1][0]) std::swap(cell_poly[0], cell_poly[1]);
    } else if (detail::polygon_area(cell_poly) < 0) {
      std::swap(cell_poly[1], cell_poly[2]);
    }
    const double cell_size = k == 2 ? cell_poly[1][0] - cell_poly[0][0] : detail::polygon_area(cell_poly);
    double covered = 0.0;
    double best = 0.0;
    for (std::size_t p = 0; p < polys.size(); ++p) {
      auto part = detail::clip(cell_poly, polys[p], k);
      if (k == 2) {
        if (part.size() != 2) continue;
        double len = part[1][0] - part[0][0];
        if (len <= 1e-12 * cell_size) continue;
        covered += len;
        gu.sub_cells.push_back(point_id(part[0]));
        gu.sub_cells.push_back(point_id(part[1]));
        gu.sub_values.push_back(pwc.pieces[p].value);
      } else {
        if (part.size() < 3) continue;
        double area = detail::polygon_area(part);
        if (area <= 1e-12 * cell_size) continue;
        covered += area;
        for (std::size_t t = 1; t + 1 < part.size(); ++t) {
          std::vector<detail::Vec2> tri = {part[0], part[t], part[t + 1]};
          if (std::abs(detail::polygon_area(tri)) <= 1e-14 * cell_size) continue;
          gu.sub_cells.push_back(point_id(part[0]));
          gu.sub_cells.push_back(point_id(part[t]));
          gu.sub_cells.push_back(point_id(part[t + 1]));
          gu.sub_values.push_back(pwc.pieces[p].value);
        }
      }
      best = std::max(best, pwc.pieces[p].value);
    }
    if (covered < cell_size * (1 - 1e-9)) {
      throw InvalidInput("build_upper_approx: the pieces do not cover grid cell " + std::to_string(c));
    }
    gu.cell_values[c] = best;
    gu.sub_offset.push_back(static_cast<std::uint32_t>(gu.sub_values.size()));
  }
}

bool sub_contains(const GriddedUtility& gu, std::size_t s, std::span<const double> q, double tol) {
  const std::size_t k = gu.grid.dim();
  auto x = detail::chart(q);
  if (k == 2) {
    double a = detail::chart(gu.point(gu.sub_cells[s * 2]))[0];
    double b = detail::chart(gu.point(gu.sub_cells[s * 2 + 1]))[0];
    if (a > b) std::swap(a, b);
    return x[0] >= a - tol && x[0] <= b + tol;
  }
  auto p0 = detail::chart(gu.point(gu.sub_cells[s * 3]));
  auto p1 = detail::chart(gu.point(gu.sub_cells[s * 3 + 1]));
  auto p2 = detail::chart(gu.point(gu.sub_cells[s * 3 + 2]));
  double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  double l1 = ((x[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (x[1] - p0[1])) / det;
  double l2 = ((p1[0] - p0[0]) * (x[1] - p0[1]) - (x[0] - p0[0]) * (p1[1] - p0[1])) / det;
  return l1 >= -tol && l2 >= -tol && 1.0 - l1 - l2 >= -tol;
}

}  // namespace

std::size_t GriddedUtility::num_points() const { return grid.num_vertices() + extra_points.size() / grid.dim(); }

std::span<const double> GriddedUtility::point(std::size_t i) const {
  const std::size_t nv = grid.num_vertices();
  if (i < nv) return grid.vertex(i);
  return {extra_points.data() + (i - nv) * grid.dim(), grid.dim()};
}

std::vector<double> GriddedUtility::point_values() const {
  const std::size_t k = grid.dim();
  std::vector<double> out(num_points(), -std::numeric_limits<double>::infinity());
  if (!refined) {
    for (std::size_t c = 0; c < grid.num_cells(); ++c) {
      for (auto id : grid.cell(c)) out[id] = std::max(out[id], cell_values[c]);
    }
  } else {
    for (std::size_t s = 0; s < sub_values.size(); ++s) {
      for (std::size_t t = 0; t < k; ++t) {
        auto id = sub_cells[s * k + t];
        out[id] = std::max(out[id], sub_values[s]);
      }
    }
  }
  for (double& v : out) {
    if (!std::isfinite(v)) v = 0.0;
  }
  return out;
}

double utility_lipschitz(const UtilitySpec& utility) {
  return std::visit(
      [](const auto& u) -> double {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, MaxLinearUtility>) {
          return functional_spread(u);
        } else if constexpr (std::is_same_v<T, WeightedMaxLinearUtility>) {
          double s = 0.0;
          for (const auto& t : u.terms) s += t.weight * functional_spread(t.term);
          return s;
        } else if constexpr (std::is_same_v<T, PiecewiseConstantUtility>) {
          return 0.0;
        } else {
          throw InvalidInput("utility_lipschitz: convert auction utilities with to_max_linear first");
        }
      },
      utility.kind);
}

double approx_diameter(const UtilitySpec& utility, double eps, double lipschitz_bound) {
  double delta = eps / std::max(lipschitz_bound, 1.0);
  double L = utility_lipschitz(utility);
  if (L > 0.0) delta = std::min(delta, eps / (2.0 * L));
  return delta;
}

GriddedUtility build_upper_approx(const UtilitySpec& utility, std::size_t k, double eps, double lipschitz_bound,
                                  const ApproxOptions& options) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("build_upper_approx: eps must be positive");
  if (!(lipschitz_bound >= 0.0) || !std::isfinite(lipschitz_bound)) {
    throw InvalidInput("build_upper_approx: Lipschitz bound must be finite and >= 0");
  }
  utility.validate(k);
  UtilitySpec work = utility;
  if (const auto* a = std::get_if<AuctionUtility>(&utility.kind)) work = to_max_linear(a->spec, k);

  GriddedUtility gu;
  gu.source = utility;
  gu.eps = eps;
  gu.lipschitz_bound = lipschitz_bound;
  gu.utility_lipschitz = utility_lipschitz(work);
  const double delta = approx_diameter(work, eps, lipschitz_bound);
  std::size_t N = denominator_for(k, delta);
  const std::size_t mult = std::max<std::size_t>(1, options.grid_multiple);
  N = (N + mult - 1) / mult * mult;
  gu.grid = SimplexGrid::build(k, N, delta, options.vertex_cap);

  if (const auto* pwc = std::get_if<PiecewiseConstantUtility>(&work.kind)) {
    refine(gu, *pwc);
    gu.certified_gap = 0.0;
    return gu;
  }
  const SimplexGrid& grid = gu.grid;
  std::vector<double> vertex_u(grid.num_vertices());
  for (std::size_t i = 0; i < grid.num_vertices(); ++i) vertex_u[i] = eval_utility(work, grid.vertex(i));
  const double slack = gu.utility_lipschitz * grid.measured_max_diameter();
  gu.cell_values.resize(grid.num_cells());
  for (std::size_t c = 0; c < grid.num_cells(); ++c) {
    double m = -std::numeric_limits<double>::infinity();
    for (auto id : grid.cell(c)) m = std::max(m, vertex_u[id]);
    gu.cell_values[c] = m + slack;
  }
  gu.certified_gap = 2.0 * slack;
  return gu;
}

double eval_gridded(const GriddedUtility& gu, std::span<const double> q) {
  auto cells = gu.grid.locate(q, 1e-9);
  if (cells.empty()) throw InvalidInput("eval_gridded: point is not on the simplex");
  double best = -std::numeric_limits<double>::infinity();
  for (auto c : cells) {
    if (!gu.refined) {
      best = std::max(best, gu.cell_values[c]);
      continue;
    }
    for (std::size_t s = gu.sub_offset[c]; s < gu.sub_offset[c + 1]; ++s) {
      if (gu.sub_values[s] > best && sub_contains(gu, s, q, 1e-9)) best = gu.sub_values[s];
    }
  }
  if (!std::isfinite(best)) throw InvalidInput("eval_gridded: point is not covered");
  return best;
}

}  // namespace persuade
