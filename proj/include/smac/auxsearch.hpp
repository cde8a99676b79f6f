#pragma once

// Sampled optimization of the single-letter bounds over auxiliary laws, and
// region tracing through support functions.
//
// The sample set is an ordered list: structured seeds first (V degenerate or a
// copy of S, U degenerate or a copy of X1, P_X2 and P_{X1|S,X2} on a simplex
// grid), then random restarts. Restart r draws from CounterRng(seed, r), so a
// configuration with fewer restarts samples a prefix of one with more. Maxima
// are taken in list order with strict improvement, which fixes tie-breaking
// independently of the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "smac/dmregion.hpp"
#include "smac/geom2d.hpp"
#include "smac/macmodel.hpp"

namespace smac {

inline constexpr std::uint64_t kMaxGridPoints = 100'000'000;
inline constexpr double kConstraintSlack = 1e-9;

// Number of compositions of `levels` units into `dim` bins; throws DomainError
// above kMaxGridPoints.
std::uint64_t simplex_grid_size(std::size_t dim, std::size_t levels);

// Those compositions divided by `levels`, in lexicographic order of the
// composition vectors.
std::vector<std::vector<double>> simplex_grid(std::size_t dim, std::size_t levels);

struct SearchConfig {
  std::size_t levels = 4;
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  std::size_t max_iters = 0;      // coordinate-ascent sweeps per direction
  std::optional<AuxCaps> caps;    // defaults from region_caps / constrained_region_caps
  bool allow_large_caps = false;  // permit caps beyond the sufficient cardinalities
  bool no_v = false;              // V degenerate (the C' region)
  bool constrained = false;       // keep only laws with I(V,X2;Y) - I(V,X2;S) >= -1e-9
  bool force_structure = false;   // only V = S, U = X1 seeds; no restarts
  std::size_t threads = 1;

  // Throws DomainError on levels < 2 or caps outside the allowed range.
  void validate(const ChannelSizes& sizes) const;
  AuxCaps effective_caps(const ChannelSizes& sizes) const;
};

struct SupportPoint {
  Direction dir;
  double value = kNoSupport;
  RatePoint point;                  // maximizer on the witness pentagon
  RateBounds bounds;                // witness bounds
  std::optional<AuxJoint> witness;  // empty when no admissible sample exists
  std::size_t sample_index = 0;
};

struct TraceResult {
  std::vector<SupportPoint> supports;
  RatePolygon polygon;
  std::size_t samples = 0;     // size of the sample list
  std::size_t admissible = 0;  // samples meeting costs (and the constraint)
};

// Ordered sample list of the configuration; exposed for tests and nesting.
std::vector<AuxJoint> aux_samples(const DmMacChannel& ch, const SearchConfig& cfg);

SupportPoint support_value(const DmMacChannel& ch, const SearchConfig& cfg, const Direction& dir);

// Supports in every direction, then the polygon cut out by the halfplanes
// wc Rc + w1 R1 <= support. Directions must bound both rates.
TraceResult trace_region(const DmMacChannel& ch, const SearchConfig& cfg,
                         const std::vector<Direction>& directions);

struct AscentResult {
  AuxJoint aux;
  std::vector<double> history;  // objective before the first and after every sweep
};

// Moves mass between entries of one conditional row at a time, steps 0.25
// halved five times, keeping only strict improvements of the scalarized
// objective. Inadmissible laws (costs, or the constraint when `constrained`)
// score -inf.
AscentResult coordinate_ascent(const DmMacChannel& ch, const AuxJoint& aux0, const Direction& dir,
                               std::size_t max_iters, bool constrained = false);

struct CmSearchResult {
  double value = kNoSupport;
  std::optional<CommonMsgAux> witness;
};

// max over sampled P_{K,X1|S,X2} of I(K,X2;Y) - I(K,X2;S); |K| defaults to
// |S||X1||X2| + 1 (cfg.caps->u overrides it).
CmSearchResult cm_capacity_search(const DmMacChannel& ch, const SearchConfig& cfg);

struct OuterSupportPoint {
  Direction dir;
  double value = kNoSupport;
  RatePoint point;
  RateBounds bounds;
  std::optional<InputDist> witness;
  std::size_t sample_index = 0;
};

struct OuterTraceResult {
  std::vector<OuterSupportPoint> supports;
  RatePolygon polygon;
  std::size_t samples = 0;
  std::size_t admissible = 0;
};

// Same search over input laws P_X2 P_{X1|X2,S} with the outer bound pair.
std::vector<InputDist> input_samples(const DmMacChannel& ch, const SearchConfig& cfg);
OuterTraceResult trace_outer(const DmMacChannel& ch, const SearchConfig& cfg,
                             const std::vector<Direction>& directions);

}  // namespace smac
