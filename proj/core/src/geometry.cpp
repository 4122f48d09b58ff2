#include "persuade/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "persuade/errors.hpp"

namespace persuade {

std::size_t effective_vertex_cap(std::size_t requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("PERSUADE_GRID_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      throw InvalidInput(std::string("PERSUADE_GRID_CAP must be a positive integer, got '") + env + "'");
    }
    return static_cast<std::size_t>(v);
  }
  return kDefaultVertexCap;
}

std::size_t lattice_point_count(std::size_t k, std::size_t N) {
  // C(N+k-1, k-1) computed incrementally; each partial product is exact.
  const std::size_t r = k - 1;
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c = c * (N + i) / i;
    if (c > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(c);
}

namespace {

std::vector<std::vector<std::uint8_t>> all_permutations(std::size_t d) {
  std::vector<std::uint8_t> p(d);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::vector<std::vector<std::uint8_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// l1 diameter, in lattice units, of the Kuhn simplex with permutation p.
std::size_t perm_diameter(const std::vector<std::uint8_t>& p) {
  const std::size_t d = p.size();
  std::size_t best = 0;
  for (std::size_t i = 0; i <= d; ++i) {
    for (std::size_t j = i + 1; j <= d; ++j) {
      // The two vertices differ by e over dims p[i..j-1]; in q coordinates the
      // difference has a +-1 wherever the indicator changes.
      std::vector<int> ind(d + 2, 0);
      for (std::size_t t = i; t < j; ++t) ind[p[t] + 1] = 1;
      std::size_t changes = 0;
      for (std::size_t m = 0; m + 1 < ind.size(); ++m) changes += ind[m] != ind[m + 1];
      best = std::max(best, changes);
    }
  }
  return best;
}

}  // namespace

std::size_t kuhn_diameter_units(std::size_t k) {
  if (k < 2) throw InvalidInput("grid: k must be >= 2");
  if (k > 10) throw ResourceLimit("grid: k = " + std::to_string(k) + " is beyond the supported range (k <= 10)");
  std::size_t best = 0;
  for (const auto& p : all_permutations(k - 1)) best = std::max(best, perm_diameter(p));
  return best;
}

std::size_t denominator_for(std::size_t k, double max_diameter) {
  if (!(max_diameter > 0.0) || !std::isfinite(max_diameter)) {
    throw InvalidInput("grid: max diameter must be positive and finite");
  }
  double n = std::ceil(static_cast<double>(kuhn_diameter_units(k)) / max_diameter - 1e-9);
  if (n > 1e15) throw ResourceLimit("grid: requested diameter is too small");
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

std::size_t SimplexGrid::rank_cumulative(std::span<const std::size_t> y) const {
  const std::size_t d = k_ - 1;
  std::size_t idx = 0;
  std::size_t lo = 0;
  for (std::size_t r = 1; r <= d; ++r) {
    const std::size_t L = d - r;
    const std::size_t v = y[r - 1];
    idx += binom(N_ - lo + L + 1, L + 1) - binom(N_ - v + L + 1, L + 1);
    lo = v;
  }
  return idx;
}

SimplexGrid SimplexGrid::build(std::size_t k, std::size_t N, double requested_diameter, std::size_t vertex_cap) {
  if (k < 2) throw InvalidInput("grid: k must be >= 2");
  if (N < 1) throw InvalidInput("grid: denominator must be >= 1");
  if (k > 10) throw ResourceLimit("grid: k = " + std::to_string(k) + " is beyond the supported range (k <= 10)");
  const std::size_t cap = effective_vertex_cap(vertex_cap);
  const std::size_t nv = lattice_point_count(k, N);
  if (nv > cap) {
    throw ResourceLimit("grid: " + std::to_string(nv) + " vertices (k = " + std::to_string(k) + ", N = " +
                        std::to_string(N) + ") exceeds the cap of " + std::to_string(cap));
  }
  const std::size_t d = k - 1;
  double cells_estimate = std::pow(static_cast<double>(N), static_cast<double>(d));
  if (cells_estimate * static_cast<double>(k) * 4.0 > 4e9 || cells_estimate > 4e9) {
    throw ResourceLimit("grid: about " + std::to_string(static_cast<double>(cells_estimate)) +
                        " cells would not fit in memory");
  }

  SimplexGrid g;
  g.k_ = k;
  g.N_ = N;
  g.requested_diameter_ = requested_diameter;
  g.binom_.assign((N + k + 2) * (k + 1), 0);
  for (std::size_t n = 0; n < N + k + 2; ++n) {
    g.binom_[n * (k + 1)] = 1;
    for (std::size_t r = 1; r <= std::min(n, k); ++r) {
      std::uint64_t a = g.binom_[(n - 1) * (k + 1) + r - 1];
      std::uint64_t b = r <= n - 1 ? g.binom_[(n - 1) * (k + 1) + r] : 0;
      g.binom_[n * (k + 1) + r] = a + b;
    }
  }
  g.perms_ = all_permutations(d);
  std::vector<std::size_t> perm_diam(g.perms_.size());
  std::vector<std::vector<std::size_t>> pos(g.perms_.size(), std::vector<std::size_t>(d));
  for (std::size_t p = 0; p < g.perms_.size(); ++p) {
    perm_diam[p] = perm_diameter(g.perms_[p]);
    for (std::size_t t = 0; t < d; ++t) pos[p][g.perms_[p][t]] = t;
  }

  g.coords_.reserve(nv * k);
  g.cells_.reserve(static_cast<std::size_t>(cells_estimate) * k);
  g.cell_offset_.reserve(nv + 1);
  g.cell_perm_.reserve(static_cast<std::size_t>(cells_estimate));
  std::size_t used_diameter = 0;

  std::vector<std::size_t> y(d, 0);
  std::vector<std::size_t> w(d);
  std::size_t index = 0;
  while (true) {
    // Vertex coordinates from the cumulative sequence.
    std::size_t prev = 0;
    for (std::size_t j = 0; j < d; ++j) {
      g.coords_.push_back(static_cast<double>(y[j] - prev) / static_cast<double>(N));
      prev = y[j];
    }
    g.coords_.push_back(static_cast<double>(N - prev) / static_cast<double>(N));
    g.cell_offset_.push_back(static_cast<std::uint32_t>(g.cell_perm_.size()));

    if (y[d - 1] + 1 <= N) {
      for (std::size_t p = 0; p < g.perms_.size(); ++p) {
        bool ok = true;
        for (std::size_t t = 0; t + 1 < d && ok; ++t) {
          if (y[t] == y[t + 1] && pos[p][t + 1] > pos[p][t]) ok = false;
        }
        if (!ok) continue;
        g.cells_.push_back(static_cast<std::uint32_t>(index));
        w = y;
        for (std::size_t t = 0; t < d; ++t) {
          ++w[g.perms_[p][t]];
          g.cells_.push_back(static_cast<std::uint32_t>(g.rank_cumulative(w)));
        }
        g.cell_perm_.push_back(static_cast<std::uint16_t>(p));
        used_diameter = std::max(used_diameter, perm_diam[p]);
      }
    }

    // Next nondecreasing sequence in lexicographic order.
    std::size_t t = d;
    while (t > 0 && y[t - 1] == N) --t;
    if (t == 0) break;
    ++y[t - 1];
    for (std::size_t u = t; u < d; ++u) y[u] = y[t - 1];
    ++index;
  }
  g.cell_offset_.push_back(static_cast<std::uint32_t>(g.cell_perm_.size()));
  g.max_diameter_ = static_cast<double>(used_diameter) / static_cast<double>(N);
  if (g.num_vertices() != nv) throw NumericFailure("grid: vertex enumeration mismatch");
  return g;
}

SimplexGrid build_grid_with_denominator(std::size_t k, std::size_t N, std::size_t vertex_cap) {
  return SimplexGrid::build(k, N, static_cast<double>(kuhn_diameter_units(k)) / static_cast<double>(N), vertex_cap);
}

SimplexGrid build_grid(std::size_t k, double max_diameter, std::size_t vertex_cap) {
  const std::size_t N = denominator_for(k, max_diameter);
  SimplexGrid g = SimplexGrid::build(k, N, max_diameter, vertex_cap);
  if (g.measured_max_diameter() > max_diameter * (1 + 1e-12)) {
    throw NumericFailure("grid: measured diameter exceeds the requested bound");
  }
  return g;
}

std::vector<std::size_t> SimplexGrid::lattice(std::size_t i) const {
  std::vector<std::size_t> n(k_);
  auto v = vertex(i);
  for (std::size_t j = 0; j < k_; ++j) n[j] = static_cast<std::size_t>(std::llround(v[j] * static_cast<double>(N_)));
  return n;
}

std::size_t SimplexGrid::vertex_index(std::span<const std::size_t> n) const {
  if (n.size() != k_) throw InvalidInput("vertex_index: dimension mismatch");
  std::vector<std::size_t> y(k_ - 1);
  std::size_t s = 0;
  for (std::size_t j = 0; j + 1 < k_; ++j) {
    s += n[j];
    y[j] = s;
  }
  if (s + n[k_ - 1] != N_) throw InvalidInput("vertex_index: lattice coordinates must sum to N");
  return rank_cumulative(y);
}

std::vector<std::size_t> SimplexGrid::locate(std::span<const double> q, double tolerance) const {
  if (q.size() != k_) throw InvalidInput("locate: dimension mismatch");
  const std::size_t d = k_ - 1;
  std::vector<double> y(d);
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    s += q[j];
    y[j] = s * static_cast<double>(N_);
  }
  std::vector<std::array<long, 2>> cand(d);
  std::vector<std::size_t> ncand(d);
  for (std::size_t j = 0; j < d; ++j) {
    long a = static_cast<long>(std::floor(y[j] - tolerance));
    long b = static_cast<long>(std::floor(y[j] + tolerance));
    cand[j] = {a, b};
    ncand[j] = a == b ? 1 : 2;
  }
  std::vector<std::size_t> out;
  std::vector<std::size_t> choice(d, 0);
  std::vector<std::size_t> base(d);
  std::vector<double> z(d);
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      long a = cand[j][choice[j]];
      if (a < 0 || a > static_cast<long>(N_) - 1) ok = false;
      else base[j] = static_cast<std::size_t>(a);
      if (ok && j > 0 && base[j] < base[j - 1]) ok = false;
    }
    if (ok) {
      std::size_t b = rank_cumulative(base);
      for (std::size_t j = 0; j < d; ++j) z[j] = y[j] - static_cast<double>(base[j]);
      for (std::size_t c = cell_offset_[b]; c < cell_offset_[b + 1]; ++c) {
        const auto& p = perms_[cell_perm_[c]];
        bool inside = 1.0 - z[p[0]] >= -tolerance && z[p[d - 1]] >= -tolerance;
        for (std::size_t t = 0; t + 1 < d && inside; ++t) inside = z[p[t]] - z[p[t + 1]] >= -tolerance;
        if (inside) out.push_back(c);
      }
    }
    std::size_t j = 0;
    while (j < d && ++choice[j] == ncand[j]) choice[j++] = 0;
    if (j == d) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> SimplexGrid::barycentric(std::size_t c, std::span<const double> q) const {
  const std::size_t d = k_ - 1;
  auto base = lattice(cell(c)[0]);
  const auto& p = perms_[cell_perm_[c]];
  std::vector<double> z(d);
  double s = 0.0;
  std::size_t sb = 0;
  for (std::size_t j = 0; j < d; ++j) {
    s += q[j];
    sb += base[j];
    z[j] = s * static_cast<double>(N_) - static_cast<double>(sb);
  }
  std::vector<double> lambda(k_);
  lambda[0] = 1.0 - z[p[0]];
  for (std::size_t t = 1; t < d; ++t) lambda[t] = z[p[t - 1]] - z[p[t]];
  lambda[d] = z[p[d - 1]];
  return lambda;
}

double SimplexGrid::cell_volume(std::size_t c) const {
  const std::size_t d = k_ - 1;
  auto ids = cell(c);
  std::vector<double> m(d * d);
  auto v0 = vertex(ids[0]);
  for (std::size_t i = 0; i < d; ++i) {
    auto vi = vertex(ids[i + 1]);
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = vi[j] - v0[j];
  }
  double det = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(m[r * d + col]) > std::abs(m[piv * d + col])) piv = r;
    }
    if (m[piv * d + col] == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < d; ++j) std::swap(m[piv * d + j], m[col * d + j]);
      det = -det;
    }
    det *= m[col * d + col];
    for (std::size_t r = col + 1; r < d; ++r) {
      double f = m[r * d + col] / m[col * d + col];
      for (std::size_t j = col; j < d; ++j) m[r * d + j] -= f * m[col * d + j];
    }
  }
  double fact = 1.0;
  for (std::size_t i = 2; i <= d; ++i) fact *= static_cast<double>(i);
  return std::abs(det) / fact;
}

std::vector<double> project_to_contraction(std::span<const double> q, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("project_to_contraction: eps must be positive");
  const std::size_t k = q.size();
  const double s = 1.0 / (1.0 + eps * eps);
  const double floor_value = (1.0 - s) / static_cast<double>(k);
  // Project y = q - floor onto { x >= 0, sum x = s }.
  std::vector<double> u(k);
  for (std::size_t i = 0; i < k; ++i) u[i] = q[i] - floor_value;
  std::vector<double> sorted = u;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    cumsum += sorted[j];
    double t = (cumsum - s) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = std::max(u[i] - theta, 0.0) + floor_value;
  return x;
}

}  // namespace persuade
