#pragma once

// Convex polygons in the (Rc, R1) rate plane.

#include <limits>
#include <span>
#include <vector>

#include "smac/dmregion.hpp"

namespace smac {

inline constexpr double kNoSupport = -std::numeric_limits<double>::infinity();
inline constexpr double kInclusionTolerance = 1e-9;

struct RatePoint {
  double rc = 0.0;
  double r1 = 0.0;

  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

// Nonnegative weights on (Rc, R1), normalized to wc + w1 = 1.
struct Direction {
  double wc = 0.0;
  double w1 = 0.0;

  static Direction normalized(double wc, double w1);
  double dot(const RatePoint& p) const { return wc * p.rc + w1 * p.r1; }
};

// `count` directions evenly spaced from (1, 0) to (0, 1).
std::vector<Direction> even_directions(std::size_t count);

// Counterclockwise vertex list; empty, a point, a segment, or a polygon.
struct RatePolygon {
  std::vector<RatePoint> vertices;

  bool empty() const { return vertices.empty(); }
};

// {(Rc, R1) >= 0 : R1 <= a, Rc + R1 <= b}. Bounds in [-tol, 0) count as 0.
RatePolygon pentagon(const RateBounds& rb, double tol = 1e-12);

// Best point of the pentagon for `dir`, with the closed-form value. Empty
// pentagons give kNoSupport.
struct PentagonSupport {
  double value = kNoSupport;
  RatePoint point;
};
PentagonSupport pentagon_support(const RateBounds& rb, const Direction& dir, double tol = 1e-12);

// Monotone-chain convex hull, starting from the lexicographically smallest
// vertex; collinear and duplicate points are dropped.
RatePolygon hull(std::span<const RatePoint> points);

double support(const RatePolygon& poly, const Direction& dir);

// Every vertex of `inner` lies within `outer` up to distance `tol`.
bool includes(const RatePolygon& outer, const RatePolygon& inner, double tol = kInclusionTolerance);

// {p >= 0 : dir_k . p <= h_k for all k}. Any kNoSupport level yields the empty
// polygon. Requires some direction with wc > 0 and some with w1 > 0.
RatePolygon halfplane_region(std::span<const Direction> dirs, std::span<const double> levels);

}  // namespace smac
