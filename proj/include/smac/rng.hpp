#pragma once

// Counter-based generator: the stream for (seed, index) is a pure function of
// both, so work split across threads draws the same numbers as a serial run.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace smac {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(key_ + 0xD1B54A32D192ED03ull * ++counter_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1}; n > 0.
  std::size_t below(std::size_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return static_cast<std::size_t>(r % n);
  }

  // Uniform point of the probability simplex (normalized exponentials).
  void simplex_point(std::span<double> out);

  // `units` unit masses dropped into uniformly random bins, divided by units.
  void grid_point(std::span<double> out, std::size_t units);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace smac
