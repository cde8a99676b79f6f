#pragma once

// Command implementations behind the `smac` tool. Each returns the complete
// output text: a manifest of `# key=value` lines followed by CSV (or the
// canonical system text for fme). Wall-clock time is left to the caller so
// that reruns are byte-identical.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smac::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Fixed six-decimal rendering; "-inf"/"inf"/"nan" for non-finite values and
// no negative zero.
std::string fmt6(double v);

class Manifest {
 public:
  explicit Manifest(std::string command);
  Manifest& add(const std::string& key, const std::string& value);
  Manifest& add(const std::string& key, double value) { return add(key, fmt6(value)); }
  Manifest& add(const std::string& key, std::size_t value) { return add(key, std::to_string(value)); }
  Manifest& add(const std::string& key, bool value) { return add(key, std::string(value ? "1" : "0")); }
  std::string render() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Raised when an output fails a module-level sanity invariant.
class SanityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DmRegionOptions {
  std::string channel_file;
  std::size_t levels = 4;
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  std::optional<std::size_t> umax;
  std::optional<std::size_t> vmax;
  bool no_v = false;
  bool constrained = false;
  bool force_structure = false;
  bool allow_large_caps = false;
  std::size_t max_iters = 0;
  std::size_t directions = 33;
  std::size_t threads = 1;  // not part of the manifest; output does not depend on it
};

std::string cmd_dm_region(const DmRegionOptions& opt);

// Uses channel_file, levels, restarts, seed, force_structure, directions, threads.
std::string cmd_dm_outer(const DmRegionOptions& opt);

struct CmCapacityOptions {
  std::string channel_file;
  std::size_t levels = 4;
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  std::optional<std::size_t> kmax;
  std::size_t threads = 1;
};

std::string cmd_cm_capacity(const CmCapacityOptions& opt);

struct BinaryExampleOptions {
  double p = 0.1;
  double q1 = 0.2;
  double q2 = 0.5;
  bool sweep = false;  // p, q1 over {0.05, 0.10, ..., 0.45}
  std::size_t levels = 201;
};

std::string cmd_binary_example(const BinaryExampleOptions& opt);

struct GaussianOptions {
  double p1 = 1.0;
  double p2 = 1.0;
  double q = 1.0;
  double n = 1.0;
  std::size_t grid = 101;
  bool refine = true;
  std::size_t directions = 33;
};

std::string cmd_gaussian(const GaussianOptions& opt);

std::string cmd_fme(const std::string& system_file);

// Fixture generators.
std::string cmd_binary_channel(double p, std::optional<double> q1, std::optional<double> q2);
std::string cmd_random_channel(std::size_t s, std::size_t x1, std::size_t x2, std::size_t y, std::uint64_t seed);

}  // namespace smac::cli
