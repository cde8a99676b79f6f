#include "smac/gaussregion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smac/infocore.hpp"

namespace smac::gauss {

void GaussianParams::validate() const {
  if (!(p1 >= 0.0 && p2 >= 0.0 && q >= 0.0)) {
    throw DomainError("gaussian: P1, P2, Q must be >= 0");
  }
  if (!(n > 0.0)) throw DomainError("gaussian: N must be > 0");
}

bool CorrPair::feasible(double tol) const {
  return rho12 >= 0.0 && rho12 <= 1.0 && rho1s >= -1.0 && rho1s <= 0.0 &&
         rho12 * rho12 + rho1s * rho1s <= 1.0 + tol;
}

RateBounds gauss_bounds(const GaussianParams& gp, const CorrPair& c) {
  gp.validate();
  if (!c.feasible()) throw DomainError("gauss_bounds: infeasible correlation pair");
  const double free_share = std::max(0.0, 1.0 - c.rho12 * c.rho12 - c.rho1s * c.rho1s);
  const double sp1 = std::sqrt(gp.p1);
  const double private_power = gp.p1 * free_share;
  const double a = 0.5 * std::log2(1.0 + private_power / gp.n);
  const double coherent = std::sqrt(gp.p2) + c.rho12 * sp1;
  const double state_residual = std::sqrt(gp.q) + c.rho1s * sp1;
  const double interference = private_power + state_residual * state_residual + gp.n;
  const double common = 0.5 * std::log2(1.0 + coherent * coherent / interference);
  return {a, common + a};
}

std::vector<CorrPair> corr_grid(std::size_t grid_steps) {
  if (grid_steps < 2) throw std::invalid_argument("corr_grid: grid_steps must be >= 2");
  const double step = 1.0 / static_cast<double>(grid_steps - 1);
  std::vector<CorrPair> out;
  for (std::size_t i = 0; i < grid_steps; ++i) {
    for (std::size_t j = 0; j < grid_steps; ++j) {
      const CorrPair c{static_cast<double>(i) * step, -static_cast<double>(j) * step};
      if (c.feasible()) out.push_back(c);
    }
  }
  return out;
}

namespace {

CorrPair pull_into_disc(CorrPair c) {
  c.rho12 = std::clamp(c.rho12, 0.0, 1.0);
  c.rho1s = std::clamp(c.rho1s, -1.0, 0.0);
  const double r = std::hypot(c.rho12, c.rho1s);
  if (r > 1.0) {
    c.rho12 /= r;
    c.rho1s /= r;
    if (!c.feasible()) c.rho12 = std::sqrt(std::max(0.0, 1.0 - c.rho1s * c.rho1s));
  }
  return c;
}

}  // namespace

CorrOptimum maximize_over_corr(const std::function<double(const CorrPair&)>& objective,
                               const SearchOptions& opt) {
  CorrOptimum best;
  for (const auto& c : corr_grid(opt.grid_steps)) {
    const double v = objective(c);
    if (v > best.value) best = {v, c};
  }
  if (!opt.refine || best.value == kNoSupport) return best;

  static constexpr int kMoves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                       {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  double step = 0.1;
  for (int halving = 0; halving <= 20; ++halving, step *= 0.5) {
    for (int rounds = 0; rounds < 200; ++rounds) {
      CorrOptimum candidate = best;
      for (const auto& m : kMoves) {
        const CorrPair c = pull_into_disc({best.at.rho12 + m[0] * step, best.at.rho1s + m[1] * step});
        const double v = objective(c);
        if (v > candidate.value) candidate = {v, c};
      }
      if (!(candidate.value > best.value)) break;
      best = candidate;
    }
  }
  return best;
}

GaussRegion gauss_region(const GaussianParams& gp, const SearchOptions& opt,
                         const std::vector<Direction>& directions) {
  gp.validate();
  GaussRegion out;
  std::vector<double> levels;
  for (const auto& dir : directions) {
    const auto opt_c = maximize_over_corr(
        [&](const CorrPair& c) { return pentagon_support(gauss_bounds(gp, c), dir).value; }, opt);
    DirectionalSupport ds{dir, opt_c.value, opt_c.at, {}};
    ds.point = pentagon_support(gauss_bounds(gp, opt_c.at), dir).point;
    out.supports.push_back(ds);
    levels.push_back(opt_c.value);
  }
  out.polygon = halfplane_region(directions, levels);
  return out;
}

CommonMessageResult gauss_cm_capacity(const GaussianParams& gp, const SearchOptions& opt) {
  gp.validate();
  const auto best =
      maximize_over_corr([&](const CorrPair& c) { return gauss_bounds(gp, c).b; }, opt);
  return {best.value, best.at};
}

}  // namespace smac::gauss
