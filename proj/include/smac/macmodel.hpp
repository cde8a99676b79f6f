#pragma once

// State-dependent discrete memoryless MAC W(y | x1, x2, s) with state prior
// Q_S, the auxiliary distributions used to evaluate its rate regions, and the
// text format channels are stored in.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smac/infocore.hpp"

namespace smac {

struct ChannelSizes {
  std::size_t s = 0;
  std::size_t x1 = 0;
  std::size_t x2 = 0;
  std::size_t y = 0;

  std::size_t inputs_and_state() const { return s * x1 * x2; }
  friend bool operator==(const ChannelSizes&, const ChannelSizes&) = default;
};

// First-moment input constraints E[X1] <= x1_mean, E[X2] <= x2_mean.
struct CostConstraints {
  std::optional<double> x1_mean;
  std::optional<double> x2_mean;

  friend bool operator==(const CostConstraints&, const CostConstraints&) = default;
};

class ChannelFormatError : public std::runtime_error {
 public:
  ChannelFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DmMacChannel {
 public:
  // `kernel` is indexed [((x1 * |X2| + x2) * |S| + s) * |Y| + y].
  DmMacChannel(ChannelSizes sizes, Pmf state_prior, std::vector<double> kernel,
               std::vector<std::size_t> y_components = {}, CostConstraints costs = {});

  const ChannelSizes& sizes() const { return sizes_; }
  const Pmf& state_prior() const { return prior_; }
  const std::vector<double>& kernel() const { return kernel_; }
  const std::vector<std::size_t>& y_components() const { return y_components_; }
  const CostConstraints& costs() const { return costs_; }

  double w(std::size_t y, std::size_t x1, std::size_t x2, std::size_t s) const {
    return kernel_[((x1 * sizes_.x2 + x2) * sizes_.s + s) * sizes_.y + y];
  }

  // True when W(y|x1,x2,s) does not depend on s (within tol).
  bool is_state_independent(double tol = kMassTolerance) const;

  friend bool operator==(const DmMacChannel&, const DmMacChannel&) = default;

 private:
  ChannelSizes sizes_;
  Pmf prior_;
  std::vector<double> kernel_;
  std::vector<std::size_t> y_components_;
  CostConstraints costs_;
};

// Factored auxiliary law Q_S P_X2 P_{V|S,X2} P_{U,X1|S,V,X2}.
struct AuxJoint {
  std::size_t u_size = 1;
  std::size_t v_size = 1;
  std::vector<double> px2;              // [x2]
  std::vector<double> pv_given_sx2;     // [(s*|X2| + x2)*|V| + v]
  std::vector<double> pux1_given_svx2;  // [((s*|V| + v)*|X2| + x2)*|U||X1| + u*|X1| + x1]

  void validate(const ChannelSizes& sizes) const;
  friend bool operator==(const AuxJoint&, const AuxJoint&) = default;
};

// Q_S P_X2 P_{X1|X2,S}.
struct InputDist {
  std::vector<double> px2;            // [x2]
  std::vector<double> px1_given_x2s;  // [(x2*|S| + s)*|X1| + x1]

  void validate(const ChannelSizes& sizes) const;
  friend bool operator==(const InputDist&, const InputDist&) = default;
};

// Q_S P_X2 P_{K,X1|S,X2}.
struct CommonMsgAux {
  std::size_t k_size = 1;
  std::vector<double> px2;             // [x2]
  std::vector<double> pkx1_given_sx2;  // [(s*|X2| + x2)*|K||X1| + k*|X1| + x1]

  void validate(const ChannelSizes& sizes) const;
  friend bool operator==(const CommonMsgAux&, const CommonMsgAux&) = default;
};

// P_Z P_{X1|Z} P_{X2|Z}, for channels that ignore the state.
struct NoStateDist {
  std::vector<double> pz;           // [z]
  std::vector<double> px1_given_z;  // [z*|X1| + x1]
  std::vector<double> px2_given_z;  // [z*|X2| + x2]

  void validate(const ChannelSizes& sizes) const;
};

struct AuxCaps {
  std::size_t u = 1;
  std::size_t v = 1;
};

// Sufficient cardinalities for exhausting the region: |V| <= |S||X1||X2| + 1,
// |U| <= |V| |S||X1||X2|.
AuxCaps region_caps(const ChannelSizes& sizes);
// Same with one extra V symbol for the compression-index-decoded variant.
AuxCaps constrained_region_caps(const ChannelSizes& sizes);

// Joint over (S, U, V, X1, X2, Y).
JointPmf assemble_joint(const DmMacChannel& ch, const AuxJoint& aux);
// Joint over (S, X1, X2, Y).
JointPmf input_joint(const DmMacChannel& ch, const InputDist& d);
// Joint over (S, K, X1, X2, Y).
JointPmf common_msg_joint(const DmMacChannel& ch, const CommonMsgAux& k);
// Joint over (Z, X1, X2, Y); requires a state-independent channel.
JointPmf nostate_joint(const DmMacChannel& ch, const NoStateDist& d);

// P_{X1|X2,S} obtained by summing U and V out of the auxiliary law.
InputDist induced_input_dist(const ChannelSizes& sizes, const AuxJoint& aux);
InputDist induced_input_dist(const ChannelSizes& sizes, const CommonMsgAux& k);

// Input means E[X1], E[X2] with symbols read as integers 0..n-1.
double mean_x1(const DmMacChannel& ch, const InputDist& d);
double mean_x2(const InputDist& d);
bool meets_costs(const DmMacChannel& ch, const InputDist& d, double tol = kMassTolerance);

DmMacChannel parse_channel(std::string_view text);
std::string serialize_channel(const DmMacChannel& ch);
DmMacChannel load_channel(const std::string& path);

// Binary MAC with Y = (Y1, Y2), Y1 = X1 ^ S ^ Z1 with Z1 ~ Bernoulli(p),
// Y2 = X2, S ~ Bernoulli(1/2). Flattened output index y = 2*y1 + y2.
DmMacChannel binary_example_channel(double p, CostConstraints costs = {});

// Deterministic channel y = f(x1, x2, s) with the given state prior.
DmMacChannel deterministic_channel(ChannelSizes sizes, Pmf state_prior,
                                   const std::function<std::size_t(std::size_t, std::size_t,
                                                                   std::size_t)>& f);

// Channel with uniformly random kernel rows and prior, keyed by seed.
DmMacChannel random_channel(ChannelSizes sizes, std::uint64_t seed);

}  // namespace smac
