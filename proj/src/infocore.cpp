#include "smac/infocore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace smac {

namespace {

void check_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0,1], got " << x;
    throw DomainError(os.str());
  }
}

double plogp(double p) { return p > kZeroProbability ? p * std::log2(p) : 0.0; }

}  // namespace

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("Pmf: empty alphabet");
  if (!is_stochastic(probs_)) throw DomainError("Pmf: entries must be >= 0 and sum to 1");
}

Pmf Pmf::uniform(std::size_t n) {
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> p(n, 0.0);
  p.at(at) = 1.0;
  return Pmf(std::move(p));
}

bool is_stochastic(std::span<const double> row, double tol) {
  double sum = 0.0;
  for (double x : row) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

JointPmf::JointPmf(std::vector<RandomVariable> variables, std::vector<double> table)
    : vars_(std::move(variables)), table_(std::move(table)) {
  if (vars_.size() > 31) throw DomainError("JointPmf: at most 31 variables");
  std::size_t n = 1;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& v = vars_[i];
    if (v.size == 0) throw DomainError("JointPmf: variable '" + v.name + "' has empty alphabet");
    for (std::size_t j = 0; j < i; ++j) {
      if (vars_[j].name == v.name) throw DomainError("JointPmf: duplicate variable '" + v.name + "'");
    }
    if (n > kMaxTableEntries / v.size) throw DomainError("JointPmf: table exceeds 1e7 entries");
    n *= v.size;
  }
  if (table_.size() != n) throw DomainError("JointPmf: table size does not match alphabet sizes");
  if (!is_stochastic(table_)) throw DomainError("JointPmf: table must be nonnegative with unit mass");
}

std::size_t JointPmf::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw DomainError("unknown variable '" + name + "'");
}

std::uint32_t JointPmf::mask_of(const Group& group) const {
  std::uint32_t mask = 0;
  for (const auto& name : group) mask |= 1u << index_of(name);
  return mask;
}

std::vector<double> JointPmf::marginal_table(std::uint32_t mask) const {
  const std::size_t k = vars_.size();
  // Stride of each kept variable inside the marginal table.
  std::vector<std::size_t> mstride(k, 0);
  std::size_t msize = 1;
  for (std::size_t i = k; i-- > 0;) {
    if (mask & (1u << i)) {
      mstride[i] = msize;
      msize *= vars_[i].size;
    }
  }
  std::vector<double> out(msize, 0.0);
  if (mask == 0) {
    out[0] = std::accumulate(table_.begin(), table_.end(), 0.0);
    return out;
  }

  std::vector<std::size_t> digit(k, 0);
  std::size_t m = 0;
  for (double p : table_) {
    out[m] += p;
    // Odometer increment, last variable fastest.
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < vars_[i].size) {
        m += mstride[i];
        break;
      }
      m -= mstride[i] * (vars_[i].size - 1);
      digit[i] = 0;
    }
  }
  return out;
}

JointPmf JointPmf::marginal(const Group& group) const {
  const std::uint32_t mask = mask_of(group);
  std::vector<RandomVariable> kept;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (mask & (1u << i)) kept.push_back(vars_[i]);
  }
  return JointPmf(std::move(kept), marginal_table(mask));
}

double JointPmf::entropy_bits(std::uint32_t mask) const {
  if (mask == 0) return 0.0;
  return entropy_of(marginal_table(mask));
}

double binary_entropy(double alpha) {
  check_probability(alpha, "binary_entropy: alpha");
  return -plogp(alpha) - plogp(1.0 - alpha);
}

double binary_convolution(double p, double q) {
  check_probability(p, "binary_convolution: p");
  check_probability(q, "binary_convolution: q");
  return p * (1.0 - q) + q * (1.0 - p);
}

double entropy_of(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h -= plogp(p);
  return std::max(h, 0.0);
}

double entropy(const JointPmf& joint, const Group& group) {
  if (group.empty()) throw DomainError("entropy: empty group");
  return joint.entropy_bits(joint.mask_of(group));
}

double cond_mutual_information(const JointPmf& joint, const Group& a, const Group& b,
                               const Group& c) {
  if (a.empty() || b.empty()) throw DomainError("cond_mutual_information: empty group");
  const std::uint32_t ma = joint.mask_of(a);
  const std::uint32_t mb = joint.mask_of(b);
  const std::uint32_t mc = joint.mask_of(c);
  if ((ma & mb) || (ma & mc) || (mb & mc)) {
    throw DomainError("cond_mutual_information: groups must be disjoint");
  }
  const double value = joint.entropy_bits(ma | mc) + joint.entropy_bits(mb | mc) -
                       joint.entropy_bits(ma | mb | mc) - joint.entropy_bits(mc);
  if (value < 0.0 && value >= -kInfoClampTolerance) return 0.0;
  return value;
}

}  // namespace smac
