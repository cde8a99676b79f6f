#include "smac/macmodel.hpp"

#include <gtest/gtest.h>

#include "smac/infocore.hpp"
#include "smac/rng.hpp"

namespace smac {
namespace {

const char* kBinaryFile = R"(# binary example, p = 0.1
dmmac v1
sizes 2 2 2 4
ycomponents 2 2
prior 0.5 0.5
kernel
0 0 0 : 0.9 0 0.1 0
0 0 1 : 0.1 0 0.9 0
0 1 0 : 0 0.9 0 0.1
0 1 1 : 0 0.1 0 0.9
1 0 0 : 0.1 0 0.9 0
1 0 1 : 0.9 0 0.1 0
1 1 0 : 0 0.1 0 0.9
1 1 1 : 0 0.9 0 0.1
)";

AuxJoint random_aux(const ChannelSizes& sz, std::size_t u, std::size_t v, std::uint64_t seed) {
  CounterRng rng(seed, 1);
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

TEST(ParseChannel, BinaryExampleFile) {
  const DmMacChannel ch = parse_channel(kBinaryFile);
  EXPECT_EQ(ch.sizes(), (ChannelSizes{2, 2, 2, 4}));
  EXPECT_EQ(ch.y_components(), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(ch, binary_example_channel(0.1));
}

TEST(ParseChannel, RejectsNonStochasticRow) {
  std::string text = kBinaryFile;
  text.replace(text.find("0 0 0 : 0.9 0 0.1 0"), 19, "0 0 0 : 0.8 0 0.1 0");
  try {
    parse_channel(text);
    FAIL() << "expected a row-sum error";
  } catch (const ChannelFormatError& e) {
    EXPECT_EQ(e.line(), 7u);
  }
}

TEST(ParseChannel, RejectsMissingPrior) {
  std::string text = kBinaryFile;
  text.erase(text.find("prior"), std::string("prior 0.5 0.5\n").size());
  EXPECT_THROW(parse_channel(text), ChannelFormatError);
}

TEST(ParseChannel, RejectsMalformedInput) {
  EXPECT_THROW(parse_channel("dmmac v2\n"), ChannelFormatError);
  EXPECT_THROW(parse_channel("dmmac v1\nsizes 2 2 2\n"), ChannelFormatError);
  EXPECT_THROW(parse_channel("dmmac v1\nsizes 1 1 1 2\nprior 1\nkernel\n0 0 0 : 0.5\n"), ChannelFormatError);
  EXPECT_THROW(parse_channel("dmmac v1\nsizes 1 1 1 2\nprior 1\nkernel\n0 0 1 : 0.5 0.5\n"), ChannelFormatError);
  EXPECT_THROW(parse_channel("dmmac v1\nsizes 1 1 1 2\nprior 1\n"), ChannelFormatError);
}

TEST(ParseChannel, ReadsConstraints) {
  const std::string text = std::string(kBinaryFile) + "constraint X1 <= 0.2\n";
  const DmMacChannel ch = parse_channel(text);
  ASSERT_TRUE(ch.costs().x1_mean.has_value());
  EXPECT_EQ(*ch.costs().x1_mean, 0.2);
  EXPECT_FALSE(ch.costs().x2_mean.has_value());
}

TEST(SerializeChannel, RoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DmMacChannel ch = random_channel({3, 2, 2, 3}, seed);
    EXPECT_EQ(parse_channel(serialize_channel(ch)), ch);
  }
  const DmMacChannel costly = binary_example_channel(0.05, {0.3, 0.5});
  EXPECT_EQ(parse_channel(serialize_channel(costly)), costly);
}

TEST(BinaryExampleChannel, NoiseLevels) {
  const DmMacChannel clean = binary_example_channel(0.0);
  const DmMacChannel full = binary_example_channel(0.5);
  const DmMacChannel mid = binary_example_channel(0.1);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t y1 = x1 ^ s;
        EXPECT_EQ(clean.w(2 * y1 + x2, x1, x2, s), 1.0);
        EXPECT_EQ(full.w(2 * y1 + x2, x1, x2, s), 0.5);
        EXPECT_DOUBLE_EQ(mid.w(2 * (1 - y1) + x2, x1, x2, s), 0.1);
        // Y2 = X2 exactly.
        EXPECT_EQ(mid.w(2 * y1 + (1 - x2), x1, x2, s), 0.0);
      }
  EXPECT_THROW(binary_example_channel(0.6), DomainError);
}

TEST(AssembleJoint, DegenerateAuxFactorizes) {
  const DmMacChannel ch = binary_example_channel(0.1);
  AuxJoint a;
  a.px2 = {0.3, 0.7};
  a.pv_given_sx2 = {1, 1, 1, 1};
  a.pux1_given_svx2 = {1, 0, 1, 0, 1, 0, 1, 0};  // X1 = 0
  const JointPmf j = assemble_joint(ch, a);
  const auto& sz = ch.sizes();
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t y = 0; y < 4; ++y) {
        // Variable order S, U, V, X1, X2, Y with X1 = 0.
        const std::size_t idx = ((s * 2 + 0) * 2 + x2) * sz.y + y;
        EXPECT_DOUBLE_EQ(j.table()[idx], 0.5 * a.px2[x2] * ch.w(y, 0, x2, s));
      }
}

TEST(AssembleJoint, MassStateMarginalAndMarkovChain) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DmMacChannel ch = random_channel({2, 2, 3, 3}, seed);
    const AuxJoint a = random_aux(ch.sizes(), 3, 2, seed);
    const JointPmf j = assemble_joint(ch, a);
    double total = 0.0;
    for (double x : j.table()) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    const auto ps = j.marginal({"S"});
    for (std::size_t s = 0; s < 2; ++s) EXPECT_NEAR(ps.table()[s], ch.state_prior()[s], 1e-12);
    EXPECT_NEAR(cond_mutual_information(j, {"X2"}, {"S"}), 0.0, 1e-12);
    EXPECT_NEAR(cond_mutual_information(j, {"U", "V"}, {"Y"}, {"S", "X1", "X2"}), 0.0, 1e-10);
  }
}

TEST(AssembleJoint, RejectsMismatchedAux) {
  const DmMacChannel ch = binary_example_channel(0.1);
  AuxJoint a = random_aux(ch.sizes(), 2, 2, 3);
  a.px2.push_back(0.0);
  EXPECT_THROW(assemble_joint(ch, a), DomainError);
  AuxJoint b = random_aux(ch.sizes(), 2, 2, 3);
  b.pv_given_sx2[0] += 0.1;
  EXPECT_THROW(assemble_joint(ch, b), DomainError);
}

TEST(InducedInputDist, MatchesJointMarginal) {
  const DmMacChannel ch = random_channel({2, 3, 2, 2}, 5);
  const AuxJoint a = random_aux(ch.sizes(), 2, 3, 9);
  const InputDist d = induced_input_dist(ch.sizes(), a);
  const JointPmf full = assemble_joint(ch, a);
  const JointPmf direct = input_joint(ch, d);
  const auto m = full.marginal({"S", "X1", "X2", "Y"});
  ASSERT_EQ(m.table().size(), direct.table().size());
  for (std::size_t i = 0; i < m.table().size(); ++i) EXPECT_NEAR(m.table()[i], direct.table()[i], 1e-12);
}

TEST(Caps, SufficientCardinalities) {
  const ChannelSizes sz{2, 2, 2, 4};
  EXPECT_EQ(region_caps(sz).v, 9u);
  EXPECT_EQ(region_caps(sz).u, 72u);
  EXPECT_EQ(constrained_region_caps(sz).v, 10u);
  EXPECT_EQ(constrained_region_caps(sz).u, 80u);
}

TEST(Costs, MeansAndFeasibility) {
  const DmMacChannel ch = binary_example_channel(0.1, {0.2, std::nullopt});
  InputDist d;
  d.px2 = {0.5, 0.5};
  d.px1_given_x2s = {0.8, 0.2, 0.8, 0.2, 0.8, 0.2, 0.8, 0.2};
  EXPECT_NEAR(mean_x1(ch, d), 0.2, 1e-15);
  EXPECT_NEAR(mean_x2(d), 0.5, 1e-15);
  EXPECT_TRUE(meets_costs(ch, d));
  d.px1_given_x2s = {0.7, 0.3, 0.7, 0.3, 0.7, 0.3, 0.7, 0.3};
  EXPECT_FALSE(meets_costs(ch, d));
}

TEST(NoStateJoint, RequiresStateIndependentKernel) {
  const DmMacChannel ch = binary_example_channel(0.1);
  NoStateDist d{{1.0}, {0.5, 0.5}, {0.5, 0.5}};
  EXPECT_THROW(nostate_joint(ch, d), DomainError);
}

}  // namespace
}  // namespace smac
