#include "smac/dmregion.hpp"

#include <gtest/gtest.h>

#include "smac/rng.hpp"

namespace smac {
namespace {

constexpr double kOneMinusH01 = 0.531004406410718778746;

DmMacChannel constant_channel() {
  return deterministic_channel({2, 2, 2, 2}, Pmf::uniform(2), [](auto, auto, auto) { return 0; });
}

AuxJoint degenerate_aux(const ChannelSizes& sz) {
  AuxJoint a;
  a.px2.assign(sz.x2, 0.0);
  a.px2[0] = 1.0;
  a.pv_given_sx2.assign(sz.s * sz.x2, 1.0);
  a.pux1_given_svx2.assign(sz.s * sz.x2 * sz.x1, 0.0);
  for (std::size_t r = 0; r < sz.s * sz.x2; ++r) a.pux1_given_svx2[r * sz.x1] = 1.0;
  return a;
}

// V = S, U = X1, X2 uniform, X1 uniform and independent of S.
AuxJoint structured_aux() {
  AuxJoint a;
  a.u_size = 2;
  a.v_size = 2;
  a.px2 = {0.5, 0.5};
  // rows (s, x2): V = s
  a.pv_given_sx2 = {1, 0, 1, 0, 0, 1, 0, 1};
  // rows (s, v, x2): entries (u, x1) with u = x1
  a.pux1_given_svx2.clear();
  for (int r = 0; r < 8; ++r) a.pux1_given_svx2.insert(a.pux1_given_svx2.end(), {0.5, 0, 0, 0.5});
  return a;
}

AuxJoint random_aux(const ChannelSizes& sz, std::size_t u, std::size_t v, std::uint64_t seed) {
  CounterRng rng(seed, 2);
  AuxJoint a;
  a.u_size = u;
  a.v_size = v;
  a.px2.resize(sz.x2);
  rng.simplex_point(a.px2);
  a.pv_given_sx2.resize(sz.s * sz.x2 * v);
  for (std::size_t r = 0; r < sz.s * sz.x2; ++r) rng.simplex_point(std::span(a.pv_given_sx2).subspan(r * v, v));
  const std::size_t w = u * sz.x1;
  a.pux1_given_svx2.resize(sz.s * v * sz.x2 * w);
  for (std::size_t r = 0; r < sz.s * v * sz.x2; ++r) {
    rng.simplex_point(std::span(a.pux1_given_svx2).subspan(r * w, w));
  }
  return a;
}

TEST(InnerBounds, ConstantChannelIsZero) {
  const DmMacChannel ch = constant_channel();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RateBounds rb = inner_bounds(ch, random_aux(ch.sizes(), 2, 2, seed));
    EXPECT_LE(rb.a, 1e-12);
    EXPECT_LE(rb.b, 1e-12);
  }
  const RateBounds rb = inner_bounds(ch, degenerate_aux(ch.sizes()));
  EXPECT_EQ(rb.a, 0.0);
  EXPECT_EQ(rb.b, 0.0);
}

TEST(InnerBounds, BinaryExampleStructuredAux) {
  const DmMacChannel ch = binary_example_channel(0.1);
  const RateBounds rb = inner_bounds(ch, structured_aux());
  EXPECT_NEAR(rb.a, kOneMinusH01, 1e-12);
  // b - a = I(S,X2;Y) - H(S) with X2 uniform: Y2 carries X2, Y1 carries nothing
  // about S once X1 is uniform, so b - a = 1 - 1 = 0.
  const JointPmf j = assemble_joint(ch, structured_aux());
  const double expect_gap = cond_mutual_information(j, {"V", "X2"}, {"Y"}) - cond_mutual_information(j, {"V", "X2"}, {"S"});
  EXPECT_NEAR(rb.b - rb.a, expect_gap, 1e-12);
  EXPECT_GE(rb.b, rb.a - 1e-12);
}

TEST(CprimeBounds, DegenerateUAndV) {
  const DmMacChannel ch = binary_example_channel(0.1);
  AuxJoint a = degenerate_aux(ch.sizes());
  a.px2 = {0.5, 0.5};
  const RateBounds rb = cprime_bounds(ch, a);
  EXPECT_NEAR(rb.a, 0.0, 1e-15);
  const JointPmf j = assemble_joint(ch, a);
  EXPECT_NEAR(rb.b, cond_mutual_information(j, {"X2"}, {"Y"}), 1e-12);
  EXPECT_NEAR(rb.b, 1.0, 1e-12);
}

TEST(CprimeBounds, AgreesWithInnerBoundsAndRejectsNontrivialV) {
  const DmMacChannel ch = random_channel({2, 2, 2, 3}, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AuxJoint a = random_aux(ch.sizes(), 3, 1, seed);
    const RateBounds c = cprime_bounds(ch, a);
    const RateBounds i = inner_bounds(ch, a);
    EXPECT_NEAR(c.a, i.a, 1e-12);
    EXPECT_NEAR(c.b, i.b, 1e-12);
  }
  EXPECT_THROW(cprime_bounds(ch, random_aux(ch.sizes(), 2, 2, 0)), DomainError);
}

TEST(CprimeBounds, UninformedUniformInputCarriesNothing) {
  // U = X1 uniform and independent of S: the uniform state masks X1 in Y1.
  const DmMacChannel ch = binary_example_channel(0.1);
  AuxJoint a;
  a.u_size = 2;
  a.px2 = {0.5, 0.5};
  a.pv_given_sx2 = {1, 1, 1, 1};
  for (int r = 0; r < 4; ++r) a.pux1_given_svx2.insert(a.pux1_given_svx2.end(), {0.5, 0, 0, 0.5});
  const RateBounds rb = cprime_bounds(ch, a);
  const JointPmf j = assemble_joint(ch, a);
  EXPECT_NEAR(rb.a, cond_mutual_information(j, {"U"}, {"Y"}, {"X2"}) - cond_mutual_information(j, {"U"}, {"S"}, {"X2"}), 1e-12);
  EXPECT_NEAR(rb.a, 0.0, 1e-12);
}

TEST(OuterBounds, ConstantChannel) {
  const DmMacChannel ch = constant_channel();
  InputDist d{{0.5, 0.5}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}};
  const RateBounds rb = outer_bounds_t3(ch, d);
  EXPECT_EQ(rb.a, 0.0);
  EXPECT_LE(rb.b, 0.0);
  EXPECT_NEAR(rb.b, 0.0, 1e-12);
}

TEST(OuterBounds, BinaryExampleUniformInputs) {
  const DmMacChannel ch = binary_example_channel(0.1);
  InputDist d{{0.5, 0.5}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}};
  EXPECT_NEAR(outer_bounds_t3(ch, d).a, kOneMinusH01, 1e-12);
}

TEST(CommonMessage, DegenerateAndNoiselessX2) {
  const DmMacChannel bin = binary_example_channel(0.1);
  CommonMsgAux k;
  k.px2 = {1.0, 0.0};
  k.pkx1_given_sx2 = {1, 0, 1, 0, 1, 0, 1, 0};
  EXPECT_NEAR(cm_capacity_value(bin, k), 0.0, 1e-15);

  const DmMacChannel y_is_x2 =
      deterministic_channel({2, 2, 2, 2}, Pmf::uniform(2), [](auto, std::size_t x2, auto) { return x2; });
  k.px2 = {0.5, 0.5};
  EXPECT_NEAR(cm_capacity_value(y_is_x2, k), 1.0, 1e-12);
}

TEST(CommonMessage, KEqualsUVMatchesInnerSumBound) {
  const DmMacChannel ch = random_channel({2, 2, 2, 3}, 11);
  const auto& sz = ch.sizes();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AuxJoint a = random_aux(sz, 2, 3, seed);
    // K = (U, V) with index k = v * |U| + u.
    CommonMsgAux k;
    k.k_size = a.u_size * a.v_size;
    k.px2 = a.px2;
    k.pkx1_given_sx2.assign(sz.s * sz.x2 * k.k_size * sz.x1, 0.0);
    for (std::size_t s = 0; s < sz.s; ++s)
      for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
        for (std::size_t v = 0; v < a.v_size; ++v)
          for (std::size_t u = 0; u < a.u_size; ++u)
            for (std::size_t x1 = 0; x1 < sz.x1; ++x1) {
              const double pv = a.pv_given_sx2[(s * sz.x2 + x2) * a.v_size + v];
              const double pux = a.pux1_given_svx2[((s * a.v_size + v) * sz.x2 + x2) * a.u_size * sz.x1 + u * sz.x1 + x1];
              k.pkx1_given_sx2[(s * sz.x2 + x2) * k.k_size * sz.x1 + (v * a.u_size + u) * sz.x1 + x1] = pv * pux;
            }
    EXPECT_NEAR(cm_capacity_value(ch, k), inner_bounds(ch, a).b, 1e-12);
  }
}

TEST(CompressionConstraint, Cases) {
  const DmMacChannel ch = binary_example_channel(0.1);
  EXPECT_NEAR(corollary1_constraint(ch, degenerate_aux(ch.sizes())), 0.0, 1e-15);

  AuxJoint a = degenerate_aux(ch.sizes());
  a.px2 = {0.5, 0.5};
  const JointPmf j = assemble_joint(ch, a);
  EXPECT_NEAR(corollary1_constraint(ch, a), cond_mutual_information(j, {"X2"}, {"Y"}), 1e-12);
  EXPECT_GE(corollary1_constraint(ch, a), 0.0);

  // V = S, X2 uniform: I(S,X2;Y) - H(S).
  const AuxJoint c = structured_aux();
  const JointPmf jc = assemble_joint(ch, c);
  EXPECT_NEAR(corollary1_constraint(ch, c), cond_mutual_information(jc, {"S", "X2"}, {"Y"}) - 1.0, 1e-12);
}

TEST(NoStateBounds, XorChannel) {
  const DmMacChannel xor_ch =
      deterministic_channel({1, 2, 2, 2}, Pmf::uniform(1), [](std::size_t x1, std::size_t x2, auto) { return x1 ^ x2; });
  const NoStateDist uniform{{1.0}, {0.5, 0.5}, {0.5, 0.5}};
  const RateBounds rb = nostate_bounds(xor_ch, uniform);
  EXPECT_NEAR(rb.a, 1.0, 1e-12);
  EXPECT_NEAR(rb.b, 1.0, 1e-12);

  // X1 = X2 = Z.
  const NoStateDist tied{{0.5, 0.5}, {1, 0, 0, 1}, {1, 0, 0, 1}};
  EXPECT_NEAR(nostate_bounds(xor_ch, tied).a, 0.0, 1e-12);

  const NoStateDist fixed{{1.0}, {1, 0}, {0, 1}};
  const RateBounds z = nostate_bounds(xor_ch, fixed);
  EXPECT_EQ(z.a, 0.0);
  EXPECT_EQ(z.b, 0.0);

  EXPECT_THROW(nostate_bounds(binary_example_channel(0.1), uniform), DomainError);
}

TEST(DmRegionProperties, DecompositionAndConverseDominance) {
  for (std::uint64_t c = 0; c < 5; ++c) {
    const DmMacChannel ch = random_channel({2, 2, 2, 2}, 100 + c);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const AuxJoint a = random_aux(ch.sizes(), 3, 3, seed);
      const InnerEvaluation ev = evaluate_inner(ch, a);
      EXPECT_NEAR(ev.bounds.b, ev.bounds.a + ev.compression_slack, 1e-10);
      EXPECT_NEAR(ev.compression_slack, corollary1_constraint(ch, a), 1e-15);
      const RateBounds outer = outer_bounds_t3(ch, induced_input_dist(ch.sizes(), a));
      EXPECT_LE(ev.bounds.a, outer.a + 1e-9);
      EXPECT_LE(ev.bounds.b, outer.b + 1e-9);
    }
  }
}

}  // namespace
}  // namespace smac
