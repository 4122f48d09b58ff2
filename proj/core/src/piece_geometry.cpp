#include "piece_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "persuade/errors.hpp"
#include "persuade/lp.hpp"

namespace persuade::detail {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double seg_distance(const Vec2& a, const Vec2& b, const Vec2& x) {
  double dx = b[0] - a[0], dy = b[1] - a[1];
  double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double px = a[0] + t * dx - x[0], py = a[1] + t * dy - x[1];
  return std::sqrt(px * px + py * py);
}

}  // namespace

Vec2 chart(std::span<const double> q) {
  if (q.size() == 2) return {q[1], 0.0};
  if (q.size() == 3) return {q[0], q[1]};
  throw InvalidInput("chart coordinates need k = 2 or 3");
}

std::vector<double> unchart(const Vec2& x, std::size_t k) {
  if (k == 2) return {1.0 - x[0], x[0]};
  return {x[0], x[1], 1.0 - x[0] - x[1]};
}

bool ChartPolytope::full_dimensional() const {
  if (k == 2) return poly.size() == 2 && poly[1][0] - poly[0][0] > 1e-14;
  return poly.size() >= 3 && polygon_area(poly) > 1e-18;
}

ChartPolytope chart_polytope(const Piece& piece, std::size_t k) {
  ChartPolytope out;
  out.k = k;
  std::vector<Vec2> pts;
  for (const auto& v : piece.vertices) pts.push_back(chart(v));
  if (k == 2) {
    double lo = pts.front()[0], hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    out.poly.push_back({lo, 0.0});
    if (hi > lo) out.poly.push_back({hi, 0.0});
    return out;
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) {
    out.poly = pts;
    return out;
  }
  // Andrew's monotone chain; collinear points are dropped.
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t h = 0;
  for (const auto& p : pts) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], p) <= 1e-15) --h;
    hull[h++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 2], hull[h - 1], pts[i]) <= 1e-15) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  if (hull.size() < 3) {
    // Collinear input: keep the two extreme points.
    out.poly = {pts.front(), pts.back()};
  } else {
    out.poly = std::move(hull);
  }
  return out;
}

bool contains(const ChartPolytope& p, const Vec2& x, double tolerance) {
  if (p.k == 2) {
    double lo = p.poly.front()[0], hi = p.poly.back()[0];
    return x[0] >= lo - tolerance && x[0] <= hi + tolerance;
  }
  if (p.poly.size() == 1) return std::hypot(x[0] - p.poly[0][0], x[1] - p.poly[0][1]) <= tolerance;
  if (p.poly.size() == 2) return seg_distance(p.poly[0], p.poly[1], x) <= tolerance;
  for (std::size_t i = 0; i < p.poly.size(); ++i) {
    const Vec2& a = p.poly[i];
    const Vec2& b = p.poly[(i + 1) % p.poly.size()];
    double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (cross(a, b, x) / len < -tolerance) return false;
  }
  return true;
}

std::vector<Vec2> clip(const std::vector<Vec2>& subject, const ChartPolytope& clipper, std::size_t k) {
  if (subject.empty()) return {};
  if (k == 2) {
    double lo = std::max(subject.front()[0], clipper.poly.front()[0]);
    double hi = std::min(subject.back()[0], clipper.poly.back()[0]);
    if (hi - lo <= 1e-15) return {};
    return {{lo, 0.0}, {hi, 0.0}};
  }
  std::vector<Vec2> out = subject;
  const auto& c = clipper.poly;
  for (std::size_t e = 0; e < c.size() && !out.empty(); ++e) {
    const Vec2& a = c[e];
    const Vec2& b = c[(e + 1) % c.size()];
    std::vector<Vec2> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Vec2& p = in[i];
      const Vec2& q = in[(i + 1) % in.size()];
      double dp = cross(a, b, p), dq = cross(a, b, q);
      bool pin = dp >= 0, qin = dq >= 0;
      if (pin) out.push_back(p);
      if (pin != qin) {
        double t = dp / (dp - dq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
  }
  // Remove consecutive duplicates produced by vertices lying on the clip line.
  std::vector<Vec2> clean;
  for (const auto& p : out) {
    if (clean.empty() || std::hypot(p[0] - clean.back()[0], p[1] - clean.back()[1]) > 1e-15) clean.push_back(p);
  }
  while (clean.size() > 1 && std::hypot(clean.front()[0] - clean.back()[0], clean.front()[1] - clean.back()[1]) <= 1e-15) {
    clean.pop_back();
  }
  return clean;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

bool piece_contains(const Piece& piece, std::span<const double> q, double tolerance) {
  if (q.size() <= 3) return contains(chart_polytope(piece, q.size()), chart(q), tolerance);
  return in_convex_hull(piece.vertices, q, tolerance);
}

}  // namespace persuade::detail
