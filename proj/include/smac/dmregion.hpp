#pragma once

// Single-letter rate bounds of the discrete memoryless model, evaluated for
// fixed distributions. Every bound pair (a, b) describes the pentagon
// {R1 <= a, Rc + R1 <= b, Rc, R1 >= 0}.

#include <cstdint>
#include <unordered_map>

#include "smac/infocore.hpp"
#include "smac/macmodel.hpp"

namespace smac {

struct RateBounds {
  double a = 0.0;  // bound on R1
  double b = 0.0;  // bound on Rc + R1

  friend bool operator==(const RateBounds&, const RateBounds&) = default;
};

// Memoizes entropies of one joint by variable mask.
class EntropyCache {
 public:
  explicit EntropyCache(const JointPmf& joint) : joint_(joint) {}

  double h(std::uint32_t mask);
  // I(a;b|c) on masks, clamped like cond_mutual_information.
  double mi(std::uint32_t a, std::uint32_t b, std::uint32_t c = 0);
  std::uint32_t mask(const Group& g) const { return joint_.mask_of(g); }

 private:
  const JointPmf& joint_;
  std::unordered_map<std::uint32_t, double> memo_;
};

// a = I(U;Y|V,X2) - I(U;S|V,X2), b = I(U,V,X2;Y) - I(U,V,X2;S).
RateBounds inner_bounds(const DmMacChannel& ch, const AuxJoint& aux);

// Same region with V degenerate; throws unless aux.v_size == 1.
RateBounds cprime_bounds(const DmMacChannel& ch, const AuxJoint& aux);

// a = I(X1;Y|S,X2), b = I(X1,X2;Y|S) - I(X2;S|Y).
RateBounds outer_bounds_t3(const DmMacChannel& ch, const InputDist& d);

// I(K,X2;Y) - I(K,X2;S).
double cm_capacity_value(const DmMacChannel& ch, const CommonMsgAux& k);

// I(V,X2;Y) - I(V,X2;S); must be >= 0 when compression indices are decoded.
double corollary1_constraint(const DmMacChannel& ch, const AuxJoint& aux);

// a = I(X1;Y|Z,X2), b = I(X1,X2;Y); channel must not depend on the state.
RateBounds nostate_bounds(const DmMacChannel& ch, const NoStateDist& d);

// Inner bounds and the compression constraint from one assembled joint.
struct InnerEvaluation {
  RateBounds bounds;
  double compression_slack = 0.0;  // corollary1_constraint
};
InnerEvaluation evaluate_inner(const DmMacChannel& ch, const AuxJoint& aux);

}  // namespace smac
