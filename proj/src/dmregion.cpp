#include "smac/dmregion.hpp"

namespace smac {

namespace {

// Variable positions in assemble_joint: (S, U, V, X1, X2, Y).
constexpr std::uint32_t kS = 1u << 0, kU = 1u << 1, kV = 1u << 2, kX1 = 1u << 3,
                        kX2 = 1u << 4, kY = 1u << 5;

}  // namespace

double EntropyCache::h(std::uint32_t mask) {
  if (mask == 0) return 0.0;
  auto it = memo_.find(mask);
  if (it != memo_.end()) return it->second;
  const double value = joint_.entropy_bits(mask);
  memo_.emplace(mask, value);
  return value;
}

double EntropyCache::mi(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  const double value = h(a | c) + h(b | c) - h(a | b | c) - h(c);
  if (value < 0.0 && value >= -kInfoClampTolerance) return 0.0;
  return value;
}

InnerEvaluation evaluate_inner(const DmMacChannel& ch, const AuxJoint& aux) {
  const JointPmf joint = assemble_joint(ch, aux);
  EntropyCache e(joint);
  InnerEvaluation out;
  out.bounds.a = e.mi(kU, kY, kV | kX2) - e.mi(kU, kS, kV | kX2);
  out.bounds.b = e.mi(kU | kV | kX2, kY) - e.mi(kU | kV | kX2, kS);
  out.compression_slack = e.mi(kV | kX2, kY) - e.mi(kV | kX2, kS);
  return out;
}

RateBounds inner_bounds(const DmMacChannel& ch, const AuxJoint& aux) {
  const JointPmf joint = assemble_joint(ch, aux);
  EntropyCache e(joint);
  return {e.mi(kU, kY, kV | kX2) - e.mi(kU, kS, kV | kX2),
          e.mi(kU | kV | kX2, kY) - e.mi(kU | kV | kX2, kS)};
}

RateBounds cprime_bounds(const DmMacChannel& ch, const AuxJoint& aux) {
  if (aux.v_size != 1) throw DomainError("cprime_bounds: V must be degenerate (|V| = 1)");
  const JointPmf joint = assemble_joint(ch, aux);
  EntropyCache e(joint);
  return {e.mi(kU, kY, kX2) - e.mi(kU, kS, kX2), e.mi(kU | kX2, kY) - e.mi(kU | kX2, kS)};
}

double corollary1_constraint(const DmMacChannel& ch, const AuxJoint& aux) {
  const JointPmf joint = assemble_joint(ch, aux);
  EntropyCache e(joint);
  return e.mi(kV | kX2, kY) - e.mi(kV | kX2, kS);
}

RateBounds outer_bounds_t3(const DmMacChannel& ch, const InputDist& d) {
  const JointPmf joint = input_joint(ch, d);
  EntropyCache e(joint);
  const auto s = e.mask({"S"}), x1 = e.mask({"X1"}), x2 = e.mask({"X2"}), y = e.mask({"Y"});
  return {e.mi(x1, y, s | x2), e.mi(x1 | x2, y, s) - e.mi(x2, s, y)};
}

double cm_capacity_value(const DmMacChannel& ch, const CommonMsgAux& k) {
  const JointPmf joint = common_msg_joint(ch, k);
  EntropyCache e(joint);
  const auto kx2 = e.mask({"K", "X2"});
  return e.mi(kx2, e.mask({"Y"})) - e.mi(kx2, e.mask({"S"}));
}

RateBounds nostate_bounds(const DmMacChannel& ch, const NoStateDist& d) {
  const JointPmf joint = nostate_joint(ch, d);
  EntropyCache e(joint);
  const auto z = e.mask({"Z"}), x1 = e.mask({"X1"}), x2 = e.mask({"X2"}), y = e.mask({"Y"});
  return {e.mi(x1, y, z | x2), e.mi(x1 | x2, y)};
}

}  // namespace smac
