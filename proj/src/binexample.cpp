#include "smac/binexample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smac/infocore.hpp"

namespace smac::binary {

void BinaryParams::validate() const {
  if (!(p >= 0.0 && p <= 0.5)) throw DomainError("binary example: p must lie in [0, 1/2]");
  if (!(q1 >= 0.0 && q1 <= 0.5)) throw DomainError("binary example: q1 must lie in [0, 1/2]");
}

double cb_capacity(double p, double q1) {
  BinaryParams{p, q1}.validate();
  return binary_entropy(binary_convolution(p, q1)) - binary_entropy(p);
}

double pstar(double p) {
  BinaryParams{p, 0.0}.validate();
  return 1.0 - std::exp2(-binary_entropy(p));
}

double gp_rate(double p, double q1) {
  BinaryParams{p, q1}.validate();
  const double ps = pstar(p);
  if (q1 >= ps) return q1 >= p ? binary_entropy(q1) - binary_entropy(p) : 0.0;
  // q1 < p* forces p* > 0.
  return q1 * std::log2((1.0 - ps) / ps);
}

double brute_force_cb(double p, double q1, std::size_t levels) {
  BinaryParams{p, q1}.validate();
  if (levels < 2) throw DomainError("brute_force_cb: levels must be >= 2");
  const double step = 1.0 / static_cast<double>(levels - 1);

  double best = 0.0;
  std::vector<double> table(8);
  for (std::size_t i = 0; i < levels; ++i) {
    const double t0 = static_cast<double>(i) * step;
    for (std::size_t j = 0; j < levels; ++j) {
      const double t1 = static_cast<double>(j) * step;
      if (0.5 * t0 + 0.5 * t1 > q1 + 1e-12) break;
      // Joint over (S, X1, Y1).
      for (int s = 0; s < 2; ++s) {
        const double t = s == 0 ? t0 : t1;
        for (int x1 = 0; x1 < 2; ++x1) {
          const double px = 0.5 * (x1 == 1 ? t : 1.0 - t);
          for (int y = 0; y < 2; ++y) {
            const double w = y == (x1 ^ s) ? 1.0 - p : p;
            table[(s * 2 + x1) * 2 + y] = px * w;
          }
        }
      }
      const JointPmf joint({{"S", 2}, {"X1", 2}, {"Y1", 2}}, table);
      best = std::max(best, cond_mutual_information(joint, {"X1"}, {"Y1"}, {"S"}));
    }
  }
  return best;
}

double gap(double p, double q1) { return cb_capacity(p, q1) - gp_rate(p, q1); }

}  // namespace smac::binary
