#pragma once

// Finite-alphabet probability tables and the entropy / mutual-information
// quantities evaluated on them. All logarithms are base 2.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace smac {

// Numerical tolerances shared by the information and model modules.
inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kZeroProbability = 1e-15;
inline constexpr double kInfoClampTolerance = 1e-12;
inline constexpr std::size_t kMaxTableEntries = 10'000'000;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A probability mass function over {0, ..., n-1}.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> probs);

  static Pmf uniform(std::size_t n);
  static Pmf point_mass(std::size_t n, std::size_t at);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  std::vector<double> probs_;
};

// Checks that `row` is a probability vector (entries >= 0, sum 1 within tol).
bool is_stochastic(std::span<const double> row, double tol = kMassTolerance);

struct RandomVariable {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const RandomVariable&, const RandomVariable&) = default;
};

using Group = std::vector<std::string>;

// Dense joint table over an ordered list of named variables. The table is
// row-major: the last variable varies fastest.
class JointPmf {
 public:
  JointPmf(std::vector<RandomVariable> variables, std::vector<double> table);

  const std::vector<RandomVariable>& variables() const { return vars_; }
  std::span<const double> table() const { return table_; }
  std::size_t index_of(const std::string& name) const;

  // Bit mask over variable positions; throws on unknown names.
  std::uint32_t mask_of(const Group& group) const;

  // Marginal table over the variables in `mask`, in declaration order.
  std::vector<double> marginal_table(std::uint32_t mask) const;
  JointPmf marginal(const Group& group) const;

  // Entropy of the variables in `mask`; mask 0 gives 0.
  double entropy_bits(std::uint32_t mask) const;

 private:
  std::vector<RandomVariable> vars_;
  std::vector<double> table_;
};

double binary_entropy(double alpha);
double binary_convolution(double p, double q);

// Shannon entropy of a probability vector in bits, with 0 log 0 = 0.
double entropy_of(std::span<const double> probs);

double entropy(const JointPmf& joint, const Group& group);

// I(a;b|c) = H(a,c) + H(b,c) - H(a,b,c) - H(c). Values in
// [-kInfoClampTolerance, 0) are clamped to 0.
double cond_mutual_information(const JointPmf& joint, const Group& a,
                               const Group& b, const Group& c = {});

}  // namespace smac
