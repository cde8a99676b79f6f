#pragma once

// Binary MAC example: Y1 = X1 + S + Z1 (mod 2), Y2 = X2, S ~ Bernoulli(1/2),
// Z1 ~ Bernoulli(p), input weight constraints E[X1] <= q1, E[X2] <= q2.
//
// With the strictly causal encoder relaying the state, the capacity is that of
// a binary channel with state known at both ends; without it, the informed
// encoder is limited to the binary dirty-paper rate.

#include <cstddef>

namespace smac::binary {

struct BinaryParams {
  double p = 0.0;
  double q1 = 0.5;
  double q2 = 0.5;

  // Throws DomainError unless 0 <= p <= 1/2 and 0 <= q1 <= 1/2.
  void validate() const;
  // The closed forms assume X2 may be uniform, i.e. q2 >= 1/2.
  bool q2_restrictive() const { return q2 < 0.5; }
};

// h(p * q1) - h(p).
double cb_capacity(double p, double q1);

// 1 - 2^{-h(p)}.
double pstar(double p);

// Dirty-paper rate: h(q1) - h(p) above p*, the line q1 log2((1 - p*)/p*)
// below it.
double gp_rate(double p, double q1);

// max I(X1;Y1|S) over P(X1=1|S=s) on a `levels`-point grid of [0,1] with the
// average weight at most q1.
double brute_force_cb(double p, double q1, std::size_t levels);

double gap(double p, double q1);

}  // namespace smac::binary
