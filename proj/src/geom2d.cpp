#include "smac/geom2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smac {

namespace {

constexpr double kSamePoint = 1e-12;

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a.rc - o.rc) * (b.r1 - o.r1) - (a.r1 - o.r1) * (b.rc - o.rc);
}

bool close(const RatePoint& a, const RatePoint& b) {
  return std::abs(a.rc - b.rc) <= kSamePoint && std::abs(a.r1 - b.r1) <= kSamePoint;
}

double distance_to_segment(const RatePoint& p, const RatePoint& a, const RatePoint& b) {
  const double dx = b.rc - a.rc, dy = b.r1 - a.r1;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.rc - a.rc) * dx + (p.r1 - a.r1) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.rc - (a.rc + t * dx), p.r1 - (a.r1 + t * dy));
}

}  // namespace

Direction Direction::normalized(double wc, double w1) {
  if (!(wc >= 0.0 && w1 >= 0.0) || wc + w1 <= 0.0) {
    throw std::invalid_argument("direction weights must be nonnegative and not both zero");
  }
  const double sum = wc + w1;
  return {wc / sum, w1 / sum};
}

std::vector<Direction> even_directions(std::size_t count) {
  if (count < 2) throw std::invalid_argument("need at least two directions");
  std::vector<Direction> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back({1.0 - t, t});
  }
  return out;
}

RatePolygon pentagon(const RateBounds& rb, double tol) {
  if (rb.a < -tol || rb.b < -tol) return {};
  const double a = std::max(rb.a, 0.0), b = std::max(rb.b, 0.0);
  const RatePoint pts[] = {{0, 0}, {b, 0}, {b - std::min(a, b), std::min(a, b)}, {0, std::min(a, b)}};
  return hull(pts);
}

PentagonSupport pentagon_support(const RateBounds& rb, const Direction& dir, double tol) {
  if (rb.a < -tol || rb.b < -tol) return {};
  const double a = std::max(rb.a, 0.0), b = std::max(rb.b, 0.0);
  if (dir.wc >= dir.w1) return {dir.wc * b, {b, 0.0}};
  const double m = std::min(a, b);
  const double rest = std::max(b - m, 0.0);
  return {dir.w1 * m + dir.wc * rest, {rest, m}};
}

RatePolygon hull(std::span<const RatePoint> input) {
  std::vector<RatePoint> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
    return a.rc < b.rc || (a.rc == b.rc && a.r1 < b.r1);
  });
  pts.erase(std::unique(pts.begin(), pts.end(), close), pts.end());
  if (pts.size() <= 1) return {pts};

  std::vector<RatePoint> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && close(h[0], h[1])) h.resize(1);
  return {h};
}

double support(const RatePolygon& poly, const Direction& dir) {
  double best = kNoSupport;
  for (const auto& v : poly.vertices) best = std::max(best, dir.dot(v));
  return best;
}

bool includes(const RatePolygon& outer, const RatePolygon& inner, double tol) {
  if (inner.empty()) return true;
  if (outer.empty()) return false;
  const auto& o = outer.vertices;
  for (const auto& p : inner.vertices) {
    if (o.size() == 1) {
      if (std::hypot(p.rc - o[0].rc, p.r1 - o[0].r1) > tol) return false;
    } else if (o.size() == 2) {
      if (distance_to_segment(p, o[0], o[1]) > tol) return false;
    } else {
      for (std::size_t i = 0; i < o.size(); ++i) {
        const auto& a = o[i];
        const auto& b = o[(i + 1) % o.size()];
        const double len = std::hypot(b.rc - a.rc, b.r1 - a.r1);
        if (cross(a, b, p) / len < -tol) return false;
      }
    }
  }
  return true;
}

RatePolygon halfplane_region(std::span<const Direction> dirs, std::span<const double> levels) {
  if (dirs.size() != levels.size()) throw std::invalid_argument("halfplane_region: size mismatch");
  double max_rc = std::numeric_limits<double>::infinity();
  double max_r1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    if (levels[k] == kNoSupport || levels[k] < 0.0) return {};
    if (dirs[k].wc > 0.0) max_rc = std::min(max_rc, levels[k] / dirs[k].wc);
    if (dirs[k].w1 > 0.0) max_r1 = std::min(max_r1, levels[k] / dirs[k].w1);
  }
  if (!std::isfinite(max_rc) || !std::isfinite(max_r1)) {
    throw std::invalid_argument("halfplane_region: directions must bound both rates");
  }

  std::vector<RatePoint> poly = {{0, 0}, {max_rc, 0}, {max_rc, max_r1}, {0, max_r1}};
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const auto& d = dirs[k];
    const double h = levels[k];
    std::vector<RatePoint> next;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& p = poly[i];
      const auto& q = poly[(i + 1) % poly.size()];
      const double fp = d.dot(p) - h, fq = d.dot(q) - h;
      if (fp <= 0.0) next.push_back(p);
      if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
        const double t = fp / (fp - fq);
        next.push_back({p.rc + t * (q.rc - p.rc), p.r1 + t * (q.r1 - p.r1)});
      }
    }
    poly = std::move(next);
    if (poly.empty()) return {};
  }
  for (auto& p : poly) {
    p.rc = std::max(p.rc, 0.0);
    p.r1 = std::max(p.r1, 0.0);
  }
  return hull(poly);
}

}  // namespace smac
