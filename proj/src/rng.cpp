#include "smac/rng.hpp"

#include <algorithm>
#include <cmath>

namespace smac {

void CounterRng::simplex_point(std::span<double> out) {
  double sum = 0.0;
  for (double& x : out) {
    x = -std::log1p(-uniform());
    sum += x;
  }
  if (sum <= 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
    return;
  }
  for (double& x : out) x /= sum;
}

void CounterRng::grid_point(std::span<double> out, std::size_t units) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < units; ++k) out[below(out.size())] += 1.0;
  for (double& x : out) x /= static_cast<double>(units);
}

}  // namespace smac
