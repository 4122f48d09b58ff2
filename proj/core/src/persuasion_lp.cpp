#include "persuade/persuasion_lp.hpp"

#include "persuade/errors.hpp"

namespace persuade {

LinearProgram build_persuasion_lp(const PersuasionData& data, const Posterior& prior) {
  const std::size_t k = data.k;
  const std::size_t n = data.size();
  if (prior.dim() != k) throw InvalidInput("build_persuasion_lp: prior dimension mismatch");
  if (data.points.size() != n * k) throw InvalidInput("build_persuasion_lp: point array has the wrong size");
  if (data.rows.size() != data.bounds.size()) throw InvalidInput("build_persuasion_lp: rows and bounds differ in count");
  LinearProgram lp;
  lp.objective = data.values;
  lp.eq = DenseMatrix(k, n);
  // k-1 barycenter rows; the last coordinate follows from normalization.
  for (std::size_t v = 0; v < n; ++v) {
    auto q = data.point(v);
    for (std::size_t w = 0; w + 1 < k; ++w) lp.eq(w, v) = q[w];
    lp.eq(k - 1, v) = 1.0;
  }
  for (std::size_t w = 0; w + 1 < k; ++w) lp.eq_rhs.push_back(prior[w]);
  lp.eq_rhs.push_back(1.0);
  lp.le = DenseMatrix(data.rows.size(), n);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    if (data.rows[i].size() != n) throw InvalidInput("build_persuasion_lp: constraint row has the wrong length");
    for (std::size_t v = 0; v < n; ++v) lp.le(i, v) = data.rows[i][v];
    lp.le_rhs.push_back(data.bounds[i]);
  }
  return lp;
}

LinearProgram build_persuasion_lp(const GriddedUtility& gridded, std::span<const SmoothedConstraint> constraints,
                                  double relax, const Posterior& prior) {
  PersuasionData data;
  data.k = gridded.grid.dim();
  const std::size_t n = gridded.num_points();
  data.points.reserve(n * data.k);
  for (std::size_t v = 0; v < n; ++v) {
    auto q = gridded.point(v);
    data.points.insert(data.points.end(), q.begin(), q.end());
  }
  data.values = gridded.point_values();
  for (const auto& g : constraints) {
    std::vector<double> row(n);
    for (std::size_t v = 0; v < n; ++v) row[v] = g(gridded.point(v));
    data.rows.push_back(std::move(row));
    data.bounds.push_back(g.source.bound + relax);
  }
  return build_persuasion_lp(data, prior);
}

}  // namespace persuade
