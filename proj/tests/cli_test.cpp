#include "smac/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

namespace smac::cli {
namespace {

const std::string kData = SMAC_DATA_DIR;

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> body(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& l : lines(text))
    if (l.empty() || l[0] != '#') out.push_back(l);
  return out;
}

TEST(Fmt6, Rendering) {
  EXPECT_EQ(fmt6(0.5), "0.500000");
  EXPECT_EQ(fmt6(-1e-9), "0.000000");
  EXPECT_EQ(fmt6(0.0), "0.000000");
  EXPECT_EQ(fmt6(-0.0), "0.000000");
  EXPECT_EQ(fmt6(-0.25), "-0.250000");
  EXPECT_EQ(fmt6(0.5310044064), "0.531004");
  EXPECT_EQ(fmt6(std::nan("")), "nan");
  EXPECT_EQ(fmt6(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(fmt6(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Manifest, KeyValueLines) {
  Manifest m("demo");
  m.add("x", 0.25).add("n", std::size_t{3}).add("flag", true);
  EXPECT_EQ(m.render(), "# command=demo\n# version=1.0.0\n# x=0.250000\n# n=3\n# flag=1\n");
}

TEST(FmeCommand, ReproducesReducedSystems) {
  const auto c = body(cmd_fme(kData + "/joint_index.ineq"));
  const std::vector<std::string> want_c{
      "rates Rc R1",
      "nonneg Rc R1",
      "fact S _|_ X2",
      "R1 <= H(S,U,V,X2) - H(S,V,X2) - H(U,V,X2,Y) + H(V,X2,Y)",
      "Rc + R1 <= -H(S) + H(S,U,V,X2) - H(U,V,X2,Y) + H(Y)",
  };
  EXPECT_EQ(c, want_c);
  const std::string d = cmd_fme(kData + "/decoded_index.ineq");
  EXPECT_NE(d.find("# strict inequalities relaxed to non-strict\n"), std::string::npos);
  EXPECT_NE(d.find("0 <= -H(S) + H(S,V,X2) - H(V,X2,Y) + H(Y)\n"), std::string::npos);
  EXPECT_THROW(cmd_fme(kData + "/missing.ineq"), std::runtime_error);
}

TEST(BinaryExampleCommand, SingleRowAndSweep) {
  BinaryExampleOptions o;
  o.levels = 51;
  const auto one = body(cmd_binary_example(o));
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0], "p,q1,CB,RGP,gap,CB_bruteforce");
  EXPECT_EQ(one[1].substr(0, 38), "0.100000,0.200000,0.357751,0.276055,0.");
  o.sweep = true;
  EXPECT_EQ(body(cmd_binary_example(o)).size(), 82u);
  o.sweep = false;
  o.q2 = 0.3;
  const std::string flagged = cmd_binary_example(o);
  EXPECT_NE(flagged.find("# flag="), std::string::npos);
  EXPECT_NE(body(flagged)[1].find(",nan,"), std::string::npos);
  o.p = 0.7;
  EXPECT_ANY_THROW(cmd_binary_example(o));
}

TEST(DmRegionCommand, LayoutAndManifest) {
  DmRegionOptions o;
  o.channel_file = kData + "/binary_p010.dmmac";
  o.restarts = 8;
  o.directions = 5;
  const std::string out = cmd_dm_region(o);
  EXPECT_EQ(out.rfind("# command=dm_region\n# version=1.0.0\n", 0), 0u);
  EXPECT_NE(out.find("# caveat="), std::string::npos);
  EXPECT_NE(out.find("# umax=72\n# vmax=9\n"), std::string::npos);
  const auto b = body(out);
  EXPECT_EQ(b[0], "wc,w1,support,Rc,R1");
  EXPECT_EQ(b[1].substr(0, 18), "1.000000,0.000000,");
  EXPECT_EQ(b[6], "");
  EXPECT_EQ(b[7], "vertex,Rc,R1");
  EXPECT_EQ(out.find("threads"), std::string::npos);

  o.force_structure = true;
  o.directions = 2;
  EXPECT_NE(cmd_dm_region(o).find("0.000000,1.000000,0.531004,"), std::string::npos);
}

TEST(DmRegionCommand, RejectsBadInput) {
  DmRegionOptions o;
  o.channel_file = kData + "/nope.dmmac";
  EXPECT_ANY_THROW(cmd_dm_region(o));
  o.channel_file = kData + "/binary_p010.dmmac";
  o.umax = 500;
  EXPECT_ANY_THROW(cmd_dm_region(o));
  o.umax.reset();
  o.levels = 1;
  EXPECT_ANY_THROW(cmd_dm_region(o));
}

TEST(Commands, RerunsAreByteIdentical) {
  DmRegionOptions r;
  r.channel_file = kData + "/random_2.dmmac";
  r.restarts = 16;
  r.max_iters = 1;
  r.directions = 9;
  const std::string a = cmd_dm_region(r);
  r.threads = 3;
  EXPECT_EQ(cmd_dm_region(r), a);
  EXPECT_EQ(cmd_dm_outer(r), cmd_dm_outer(r));

  CmCapacityOptions c;
  c.channel_file = kData + "/random_3.dmmac";
  c.restarts = 8;
  const std::string ca = cmd_cm_capacity(c);
  c.threads = 4;
  EXPECT_EQ(cmd_cm_capacity(c), ca);

  GaussianOptions g;
  g.grid = 21;
  EXPECT_EQ(cmd_gaussian(g), cmd_gaussian(g));
  EXPECT_EQ(cmd_random_channel(2, 2, 2, 2, 1), cmd_random_channel(2, 2, 2, 2, 1));
}

TEST(CmCapacityCommand, WitnessBlocks) {
  CmCapacityOptions c;
  c.channel_file = kData + "/binary_p010.dmmac";
  c.restarts = 4;
  const auto b = body(cmd_cm_capacity(c));
  ASSERT_GE(b.size(), 6u);
  EXPECT_EQ(b[0], "C");
  EXPECT_GT(std::stod(b[1]), 0.0);
  EXPECT_EQ(b[3], "x2,P_X2");
}

TEST(GaussianCommand, Blocks) {
  GaussianOptions g;
  g.grid = 21;
  g.directions = 5;
  const auto b = body(cmd_gaussian(g));
  EXPECT_EQ(b[0], "wc,w1,support,Rc,R1,rho12,rho1s");
  EXPECT_EQ(b[b.size() - 2], "C_G,rho12,rho1s");
}

TEST(FixtureCommands, MatchBundledFiles) {
  std::ifstream f(kData + "/random_1.dmmac");
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(cmd_random_channel(2, 2, 2, 2, 1), ss.str());
}

}  // namespace
}  // namespace smac::cli
