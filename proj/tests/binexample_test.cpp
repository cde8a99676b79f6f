#include "smac/binexample.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "smac/dmregion.hpp"
#include "smac/infocore.hpp"
#include "smac/macmodel.hpp"

namespace smac::binary {
namespace {

// Reference values computed with mpmath at 30 digits.
constexpr double kCb = 0.357750778903336674209;
constexpr double kPstar = 0.277532594415792386114;
constexpr double kGp04 = 0.501955000865387417744;
constexpr double kGp02 = 0.276055056928800911643;
constexpr double kGap = 0.0816957219745357625660;

TEST(CbCapacity, Values) {
  EXPECT_NEAR(cb_capacity(0.1, 0.2), kCb, 1e-12);
  for (double p : {0.0, 0.1, 0.3, 0.5}) EXPECT_EQ(cb_capacity(p, 0.0), 0.0);
  for (double q : {0.0, 0.2, 0.5}) EXPECT_NEAR(cb_capacity(0.5, q), 0.0, 1e-15);
  EXPECT_THROW(cb_capacity(0.6, 0.1), DomainError);
  EXPECT_THROW(cb_capacity(0.1, 0.7), DomainError);
}

TEST(Pstar, Values) {
  EXPECT_EQ(pstar(0.0), 0.0);
  EXPECT_DOUBLE_EQ(pstar(0.5), 0.5);
  EXPECT_NEAR(pstar(0.1), kPstar, 1e-12);
}

TEST(GpRate, Branches) {
  EXPECT_NEAR(gp_rate(0.1, 0.4), kGp04, 1e-12);
  EXPECT_NEAR(gp_rate(0.1, 0.2), kGp02, 1e-12);
  for (double p : {0.0, 0.1, 0.4}) EXPECT_EQ(gp_rate(p, 0.0), 0.0);
}

TEST(GpRate, ContinuousAtPstar) {
  for (int k = 1; k <= 9; ++k) {
    const double p = k / 20.0;
    const double ps = pstar(p);
    EXPECT_NEAR(binary_entropy(ps) - binary_entropy(p), ps * std::log2((1 - ps) / ps), 1e-9) << "p=" << p;
  }
}

TEST(Gap, ValuesAndLimits) {
  EXPECT_NEAR(gap(0.1, 0.2), kGap, 1e-12);
  for (int k = 1; k <= 9; ++k) {
    EXPECT_NEAR(gap(k / 20.0, 0.5), 0.0, 1e-9);
    EXPECT_NEAR(gap(1e-6, k / 20.0), 0.0, 1e-4);
  }
}

TEST(Gap, StrictlyPositiveOnGrid) {
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j <= 9; ++j) EXPECT_GT(gap(i / 20.0, j / 20.0), 1e-6);
}

TEST(BruteForce, AgreesWithClosedForm) {
  EXPECT_EQ(brute_force_cb(0.1, 0.0, 201), 0.0);
  EXPECT_NEAR(brute_force_cb(0.1, 0.2, 201), kCb, 1e-3);
  for (double q : {0.1, 0.25, 0.4}) EXPECT_NEAR(brute_force_cb(0.0, q, 201), binary_entropy(q), 1e-3);
  for (int i = 1; i <= 9; i += 2)
    for (int j = 1; j <= 9; j += 2) {
      EXPECT_NEAR(brute_force_cb(i / 20.0, j / 20.0, 201), cb_capacity(i / 20.0, j / 20.0), 1e-3);
    }
  EXPECT_THROW(brute_force_cb(0.1, 0.2, 1), DomainError);
}

TEST(BinaryParams, Q2Flag) {
  EXPECT_FALSE((BinaryParams{0.1, 0.2, 0.5}).q2_restrictive());
  EXPECT_TRUE((BinaryParams{0.1, 0.2, 0.3}).q2_restrictive());
}

// The generic evaluator reproduces CB with V = S, U = X1, X2 uniform and
// P(X1 = 1 | S = s) = q1 for both states.
TEST(GenericMachinery, InnerBoundMatchesClosedForm) {
  for (double q1 : {0.1, 0.2, 0.5}) {
    const DmMacChannel ch = binary_example_channel(0.1, {q1, std::nullopt});
    AuxJoint a;
    a.u_size = 2;
    a.v_size = 2;
    a.px2 = {0.5, 0.5};
    a.pv_given_sx2 = {1, 0, 1, 0, 0, 1, 0, 1};
    for (int r = 0; r < 8; ++r) a.pux1_given_svx2.insert(a.pux1_given_svx2.end(), {1 - q1, 0, 0, q1});
    EXPECT_TRUE(meets_costs(ch, induced_input_dist(ch.sizes(), a)));
    EXPECT_NEAR(inner_bounds(ch, a).a, cb_capacity(0.1, q1), 1e-12);
  }
}

}  // namespace
}  // namespace smac::binary
