#pragma once

// Gaussian MAC Y = X1 + X2 + S + Z with S ~ N(0, Q) known noncausally at
// encoder 1 and strictly causally at encoder 2, Z ~ N(0, N), powers P1, P2.
// The region is the union over feasible input correlations (rho12, rho1s) of
// closed-form pentagons.

#include <cstddef>
#include <functional>
#include <vector>

#include "smac/dmregion.hpp"
#include "smac/geom2d.hpp"

namespace smac::gauss {

struct GaussianParams {
  double p1 = 0.0;
  double p2 = 0.0;
  double q = 0.0;
  double n = 1.0;

  void validate() const;
  GaussianParams scaled(double lambda) const { return {p1 * lambda, p2 * lambda, q * lambda, n * lambda}; }
};

struct CorrPair {
  double rho12 = 0.0;  // in [0, 1]
  double rho1s = 0.0;  // in [-1, 0]

  bool feasible(double tol = 1e-12) const;
};

// a = 1/2 log2(1 + P1(1 - rho12^2 - rho1s^2)/N)
// b = 1/2 log2(1 + (sqrt(P2) + rho12 sqrt(P1))^2 /
//               (P1(1 - rho12^2 - rho1s^2) + (sqrt(Q) + rho1s sqrt(P1))^2 + N)) + a
RateBounds gauss_bounds(const GaussianParams& gp, const CorrPair& c);

struct SearchOptions {
  std::size_t grid_steps = 101;
  bool refine = true;
};

// Correlation pairs on a grid_steps x grid_steps lattice inside the disc.
std::vector<CorrPair> corr_grid(std::size_t grid_steps);

struct CorrOptimum {
  double value = kNoSupport;
  CorrPair at;
};

// Maximizes `objective` over the grid, then (optionally) by step-halving
// pattern search from the best grid point: step 0.1, 20 halvings, eight
// compass moves per step, points outside the disc pulled back onto it.
CorrOptimum maximize_over_corr(const std::function<double(const CorrPair&)>& objective,
                               const SearchOptions& opt);

struct DirectionalSupport {
  Direction dir;
  double value = kNoSupport;
  CorrPair witness;
  RatePoint point;
};

struct GaussRegion {
  std::vector<DirectionalSupport> supports;
  RatePolygon polygon;
};

GaussRegion gauss_region(const GaussianParams& gp, const SearchOptions& opt,
                         const std::vector<Direction>& directions);

struct CommonMessageResult {
  double value = 0.0;
  CorrPair witness;
};

CommonMessageResult gauss_cm_capacity(const GaussianParams& gp, const SearchOptions& opt);

}  // namespace smac::gauss
