#include "smac/macmodel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "smac/rng.hpp"

namespace smac {

namespace {

void check_rows(const std::vector<double>& table, std::size_t rows, std::size_t width,
                const char* what) {
  if (table.size() != rows * width) {
    throw DomainError(std::string(what) + ": expected " + std::to_string(rows * width) +
                      " entries, got " + std::to_string(table.size()));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!is_stochastic(std::span(table).subspan(r * width, width))) {
      throw DomainError(std::string(what) + ": row " + std::to_string(r) + " is not stochastic");
    }
  }
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ChannelFormatError::ChannelFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("channel file line " + std::to_string(line) + ": " + what), line_(line) {}

DmMacChannel::DmMacChannel(ChannelSizes sizes, Pmf state_prior, std::vector<double> kernel,
                           std::vector<std::size_t> y_components, CostConstraints costs)
    : sizes_(sizes),
      prior_(std::move(state_prior)),
      kernel_(std::move(kernel)),
      y_components_(std::move(y_components)),
      costs_(costs) {
  if (sizes_.s == 0 || sizes_.x1 == 0 || sizes_.x2 == 0 || sizes_.y == 0) {
    throw DomainError("channel: alphabet sizes must be positive");
  }
  if (prior_.size() != sizes_.s) throw DomainError("channel: prior length differs from |S|");
  check_rows(kernel_, sizes_.x1 * sizes_.x2 * sizes_.s, sizes_.y, "channel kernel");
  if (!y_components_.empty()) {
    const std::size_t prod = std::accumulate(y_components_.begin(), y_components_.end(),
                                             std::size_t{1}, std::multiplies<>());
    if (prod != sizes_.y) throw DomainError("channel: ycomponents product differs from |Y|");
  }
  for (const auto& c : {costs_.x1_mean, costs_.x2_mean}) {
    if (c && !(*c >= 0.0)) throw DomainError("channel: cost bound must be >= 0");
  }
}

bool DmMacChannel::is_state_independent(double tol) const {
  for (std::size_t x1 = 0; x1 < sizes_.x1; ++x1)
    for (std::size_t x2 = 0; x2 < sizes_.x2; ++x2)
      for (std::size_t s = 1; s < sizes_.s; ++s)
        for (std::size_t y = 0; y < sizes_.y; ++y)
          if (std::abs(w(y, x1, x2, s) - w(y, x1, x2, 0)) > tol) return false;
  return true;
}

void AuxJoint::validate(const ChannelSizes& sz) const {
  if (u_size == 0 || v_size == 0) throw DomainError("aux: |U| and |V| must be positive");
  check_rows(px2, 1, sz.x2, "aux P_X2");
  check_rows(pv_given_sx2, sz.s * sz.x2, v_size, "aux P_V|S,X2");
  check_rows(pux1_given_svx2, sz.s * v_size * sz.x2, u_size * sz.x1, "aux P_U,X1|S,V,X2");
}

void InputDist::validate(const ChannelSizes& sz) const {
  check_rows(px2, 1, sz.x2, "input P_X2");
  check_rows(px1_given_x2s, sz.x2 * sz.s, sz.x1, "input P_X1|X2,S");
}

void CommonMsgAux::validate(const ChannelSizes& sz) const {
  if (k_size == 0) throw DomainError("common-message aux: |K| must be positive");
  check_rows(px2, 1, sz.x2, "common-message P_X2");
  check_rows(pkx1_given_sx2, sz.s * sz.x2, k_size * sz.x1, "common-message P_K,X1|S,X2");
}

void NoStateDist::validate(const ChannelSizes& sz) const {
  if (pz.empty()) throw DomainError("no-state dist: empty Z alphabet");
  check_rows(pz, 1, pz.size(), "no-state P_Z");
  check_rows(px1_given_z, pz.size(), sz.x1, "no-state P_X1|Z");
  check_rows(px2_given_z, pz.size(), sz.x2, "no-state P_X2|Z");
}

AuxCaps region_caps(const ChannelSizes& sizes) {
  const std::size_t n = sizes.inputs_and_state();
  return {.u = (n + 1) * n, .v = n + 1};
}

AuxCaps constrained_region_caps(const ChannelSizes& sizes) {
  const std::size_t n = sizes.inputs_and_state();
  return {.u = (n + 2) * n, .v = n + 2};
}

JointPmf assemble_joint(const DmMacChannel& ch, const AuxJoint& aux) {
  const auto& sz = ch.sizes();
  aux.validate(sz);
  const std::size_t U = aux.u_size, V = aux.v_size;
  const std::size_t total = sz.s * U * V * sz.x1 * sz.x2 * sz.y;
  if (total > kMaxTableEntries) throw DomainError("assemble_joint: table exceeds 1e7 entries");

  std::vector<double> table(total, 0.0);
  const auto& prior = ch.state_prior();
  // Layout (S, U, V, X1, X2, Y), Y fastest.
  for (std::size_t s = 0; s < sz.s; ++s) {
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
      const double psx2 = prior[s] * aux.px2[x2];
      if (psx2 == 0.0) continue;
      for (std::size_t v = 0; v < V; ++v) {
        const double psvx2 = psx2 * aux.pv_given_sx2[(s * sz.x2 + x2) * V + v];
        if (psvx2 == 0.0) continue;
        const double* row = &aux.pux1_given_svx2[((s * V + v) * sz.x2 + x2) * U * sz.x1];
        for (std::size_t u = 0; u < U; ++u) {
          for (std::size_t x1 = 0; x1 < sz.x1; ++x1) {
            const double p = psvx2 * row[u * sz.x1 + x1];
            if (p == 0.0) continue;
            double* out = &table[((((s * U + u) * V + v) * sz.x1 + x1) * sz.x2 + x2) * sz.y];
            for (std::size_t y = 0; y < sz.y; ++y) out[y] = p * ch.w(y, x1, x2, s);
          }
        }
      }
    }
  }
  return JointPmf({{"S", sz.s}, {"U", U}, {"V", V}, {"X1", sz.x1}, {"X2", sz.x2}, {"Y", sz.y}},
                  std::move(table));
}

JointPmf input_joint(const DmMacChannel& ch, const InputDist& d) {
  const auto& sz = ch.sizes();
  d.validate(sz);
  std::vector<double> table(sz.s * sz.x1 * sz.x2 * sz.y, 0.0);
  for (std::size_t s = 0; s < sz.s; ++s)
    for (std::size_t x1 = 0; x1 < sz.x1; ++x1)
      for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
        const double p = ch.state_prior()[s] * d.px2[x2] * d.px1_given_x2s[(x2 * sz.s + s) * sz.x1 + x1];
        for (std::size_t y = 0; y < sz.y; ++y)
          table[((s * sz.x1 + x1) * sz.x2 + x2) * sz.y + y] = p * ch.w(y, x1, x2, s);
      }
  return JointPmf({{"S", sz.s}, {"X1", sz.x1}, {"X2", sz.x2}, {"Y", sz.y}}, std::move(table));
}

JointPmf common_msg_joint(const DmMacChannel& ch, const CommonMsgAux& k) {
  const auto& sz = ch.sizes();
  k.validate(sz);
  const std::size_t K = k.k_size;
  std::vector<double> table(sz.s * K * sz.x1 * sz.x2 * sz.y, 0.0);
  for (std::size_t s = 0; s < sz.s; ++s)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
      const double psx2 = ch.state_prior()[s] * k.px2[x2];
      const double* row = &k.pkx1_given_sx2[(s * sz.x2 + x2) * K * sz.x1];
      for (std::size_t kk = 0; kk < K; ++kk)
        for (std::size_t x1 = 0; x1 < sz.x1; ++x1) {
          const double p = psx2 * row[kk * sz.x1 + x1];
          for (std::size_t y = 0; y < sz.y; ++y)
            table[(((s * K + kk) * sz.x1 + x1) * sz.x2 + x2) * sz.y + y] = p * ch.w(y, x1, x2, s);
        }
    }
  return JointPmf({{"S", sz.s}, {"K", K}, {"X1", sz.x1}, {"X2", sz.x2}, {"Y", sz.y}},
                  std::move(table));
}

JointPmf nostate_joint(const DmMacChannel& ch, const NoStateDist& d) {
  const auto& sz = ch.sizes();
  if (!ch.is_state_independent()) {
    throw DomainError("no-state bounds: channel kernel depends on the state");
  }
  d.validate(sz);
  const std::size_t Z = d.pz.size();
  std::vector<double> table(Z * sz.x1 * sz.x2 * sz.y, 0.0);
  for (std::size_t z = 0; z < Z; ++z)
    for (std::size_t x1 = 0; x1 < sz.x1; ++x1)
      for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
        const double p = d.pz[z] * d.px1_given_z[z * sz.x1 + x1] * d.px2_given_z[z * sz.x2 + x2];
        for (std::size_t y = 0; y < sz.y; ++y)
          table[((z * sz.x1 + x1) * sz.x2 + x2) * sz.y + y] = p * ch.w(y, x1, x2, 0);
      }
  return JointPmf({{"Z", Z}, {"X1", sz.x1}, {"X2", sz.x2}, {"Y", sz.y}}, std::move(table));
}

InputDist induced_input_dist(const ChannelSizes& sz, const AuxJoint& aux) {
  aux.validate(sz);
  const std::size_t U = aux.u_size, V = aux.v_size;
  InputDist d{aux.px2, std::vector<double>(sz.x2 * sz.s * sz.x1, 0.0)};
  for (std::size_t s = 0; s < sz.s; ++s)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
      for (std::size_t v = 0; v < V; ++v) {
        const double pv = aux.pv_given_sx2[(s * sz.x2 + x2) * V + v];
        const double* row = &aux.pux1_given_svx2[((s * V + v) * sz.x2 + x2) * U * sz.x1];
        for (std::size_t u = 0; u < U; ++u)
          for (std::size_t x1 = 0; x1 < sz.x1; ++x1)
            d.px1_given_x2s[(x2 * sz.s + s) * sz.x1 + x1] += pv * row[u * sz.x1 + x1];
      }
  return d;
}

InputDist induced_input_dist(const ChannelSizes& sz, const CommonMsgAux& k) {
  k.validate(sz);
  InputDist d{k.px2, std::vector<double>(sz.x2 * sz.s * sz.x1, 0.0)};
  for (std::size_t s = 0; s < sz.s; ++s)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
      const double* row = &k.pkx1_given_sx2[(s * sz.x2 + x2) * k.k_size * sz.x1];
      for (std::size_t kk = 0; kk < k.k_size; ++kk)
        for (std::size_t x1 = 0; x1 < sz.x1; ++x1)
          d.px1_given_x2s[(x2 * sz.s + s) * sz.x1 + x1] += row[kk * sz.x1 + x1];
    }
  return d;
}

double mean_x1(const DmMacChannel& ch, const InputDist& d) {
  const auto& sz = ch.sizes();
  double m = 0.0;
  for (std::size_t s = 0; s < sz.s; ++s)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
      for (std::size_t x1 = 1; x1 < sz.x1; ++x1)
        m += ch.state_prior()[s] * d.px2[x2] * d.px1_given_x2s[(x2 * sz.s + s) * sz.x1 + x1] *
             static_cast<double>(x1);
  return m;
}

double mean_x2(const InputDist& d) {
  double m = 0.0;
  for (std::size_t x2 = 1; x2 < d.px2.size(); ++x2) m += d.px2[x2] * static_cast<double>(x2);
  return m;
}

bool meets_costs(const DmMacChannel& ch, const InputDist& d, double tol) {
  const auto& c = ch.costs();
  if (c.x1_mean && mean_x1(ch, d) > *c.x1_mean + tol) return false;
  if (c.x2_mean && mean_x2(d) > *c.x2_mean + tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Channel file format.

namespace {

double parse_number(const std::string& tok, std::size_t line) {
  double x = 0.0;
  const char* end = tok.data() + tok.size();
  auto res = std::from_chars(tok.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ChannelFormatError(line, "expected a number, got '" + tok + "'");
  }
  return x;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t x = 0;
  const char* end = tok.data() + tok.size();
  auto res = std::from_chars(tok.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ChannelFormatError(line, "expected a nonnegative integer, got '" + tok + "'");
  }
  return x;
}

}  // namespace

DmMacChannel parse_channel(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  std::optional<ChannelSizes> sizes;
  std::vector<std::size_t> ycomp;
  std::optional<std::vector<double>> prior;
  std::vector<double> kernel;
  std::vector<bool> seen;
  std::size_t kernel_rows_left = 0;
  bool kernel_started = false;
  CostConstraints costs;

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tok = split_ws(raw);
    if (tok.empty()) continue;

    if (!header) {
      if (tok.size() != 2 || tok[0] != "dmmac" || tok[1] != "v1") {
        throw ChannelFormatError(lineno, "expected header 'dmmac v1'");
      }
      header = true;
      continue;
    }

    if (kernel_rows_left > 0) {
      // x1 x2 s : w(0) ... w(|Y|-1)
      const auto& sz = *sizes;
      if (tok.size() != 4 + sz.y || tok[3] != ":") {
        throw ChannelFormatError(lineno, "kernel row must be 'x1 x2 s : ' followed by " +
                                             std::to_string(sz.y) + " probabilities");
      }
      const std::size_t x1 = parse_index(tok[0], lineno);
      const std::size_t x2 = parse_index(tok[1], lineno);
      const std::size_t s = parse_index(tok[2], lineno);
      if (x1 >= sz.x1 || x2 >= sz.x2 || s >= sz.s) {
        throw ChannelFormatError(lineno, "kernel row index out of range");
      }
      const std::size_t row = (x1 * sz.x2 + x2) * sz.s + s;
      if (seen[row]) throw ChannelFormatError(lineno, "duplicate kernel row");
      seen[row] = true;
      double sum = 0.0;
      for (std::size_t y = 0; y < sz.y; ++y) {
        const double w = parse_number(tok[4 + y], lineno);
        if (!(w >= 0.0)) throw ChannelFormatError(lineno, "negative kernel entry");
        kernel[row * sz.y + y] = w;
        sum += w;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ChannelFormatError(lineno, "kernel row sums to " + format_double(sum) + ", not 1");
      }
      if (std::abs(sum - 1.0) > kMassTolerance) {
        for (std::size_t y = 0; y < sz.y; ++y) kernel[row * sz.y + y] /= sum;
      }
      --kernel_rows_left;
      continue;
    }

    const std::string& key = tok[0];
    if (key == "sizes") {
      if (sizes) throw ChannelFormatError(lineno, "duplicate 'sizes'");
      if (tok.size() != 5) throw ChannelFormatError(lineno, "'sizes' takes S X1 X2 Y");
      ChannelSizes sz{parse_index(tok[1], lineno), parse_index(tok[2], lineno),
                      parse_index(tok[3], lineno), parse_index(tok[4], lineno)};
      if (sz.s == 0 || sz.x1 == 0 || sz.x2 == 0 || sz.y == 0) {
        throw ChannelFormatError(lineno, "alphabet sizes must be positive");
      }
      if (sz.s * sz.x1 * sz.x2 * sz.y > kMaxTableEntries) {
        throw ChannelFormatError(lineno, "kernel exceeds 1e7 entries");
      }
      sizes = sz;
    } else if (key == "ycomponents") {
      if (!sizes) throw ChannelFormatError(lineno, "'ycomponents' before 'sizes'");
      ycomp.clear();
      for (std::size_t i = 1; i < tok.size(); ++i) ycomp.push_back(parse_index(tok[i], lineno));
      const std::size_t prod =
          std::accumulate(ycomp.begin(), ycomp.end(), std::size_t{1}, std::multiplies<>());
      if (ycomp.empty() || prod != sizes->y) {
        throw ChannelFormatError(lineno, "ycomponents product must equal |Y|");
      }
    } else if (key == "prior") {
      if (!sizes) throw ChannelFormatError(lineno, "'prior' before 'sizes'");
      if (tok.size() != 1 + sizes->s) {
        throw ChannelFormatError(lineno, "'prior' needs " + std::to_string(sizes->s) + " entries");
      }
      std::vector<double> p;
      for (std::size_t i = 1; i < tok.size(); ++i) p.push_back(parse_number(tok[i], lineno));
      if (!is_stochastic(p, 1e-9)) throw ChannelFormatError(lineno, "prior is not a pmf");
      prior = std::move(p);
    } else if (key == "kernel") {
      if (!sizes) throw ChannelFormatError(lineno, "'kernel' before 'sizes'");
      if (kernel_started) throw ChannelFormatError(lineno, "duplicate 'kernel'");
      if (tok.size() != 1) throw ChannelFormatError(lineno, "'kernel' takes no arguments");
      kernel_started = true;
      kernel_rows_left = sizes->x1 * sizes->x2 * sizes->s;
      kernel.assign(kernel_rows_left * sizes->y, 0.0);
      seen.assign(kernel_rows_left, false);
    } else if (key == "constraint") {
      if (tok.size() != 4 || tok[2] != "<=" || (tok[1] != "X1" && tok[1] != "X2")) {
        throw ChannelFormatError(lineno, "constraint must read 'constraint X1 <= q' or 'X2 <= q'");
      }
      const double q = parse_number(tok[3], lineno);
      (tok[1] == "X1" ? costs.x1_mean : costs.x2_mean) = q;
    } else {
      throw ChannelFormatError(lineno, "unknown keyword '" + key + "'");
    }
  }

  if (!header) throw ChannelFormatError(lineno, "missing header 'dmmac v1'");
  if (!sizes) throw ChannelFormatError(lineno, "missing 'sizes'");
  if (!prior) throw ChannelFormatError(lineno, "missing 'prior'");
  if (!kernel_started) throw ChannelFormatError(lineno, "missing 'kernel'");
  if (kernel_rows_left > 0) throw ChannelFormatError(lineno, "kernel has missing rows");

  double psum = std::accumulate(prior->begin(), prior->end(), 0.0);
  if (std::abs(psum - 1.0) > kMassTolerance) {
    for (double& x : *prior) x /= psum;
  }
  try {
    return DmMacChannel(*sizes, Pmf(std::move(*prior)), std::move(kernel), std::move(ycomp), costs);
  } catch (const DomainError& e) {
    throw ChannelFormatError(lineno, e.what());
  }
}

std::string serialize_channel(const DmMacChannel& ch) {
  const auto& sz = ch.sizes();
  std::ostringstream os;
  os << "dmmac v1\n";
  os << "sizes " << sz.s << ' ' << sz.x1 << ' ' << sz.x2 << ' ' << sz.y << '\n';
  if (!ch.y_components().empty()) {
    os << "ycomponents";
    for (auto n : ch.y_components()) os << ' ' << n;
    os << '\n';
  }
  os << "prior";
  for (double p : ch.state_prior().probs()) os << ' ' << format_double(p);
  os << "\nkernel\n";
  for (std::size_t x1 = 0; x1 < sz.x1; ++x1)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
      for (std::size_t s = 0; s < sz.s; ++s) {
        os << x1 << ' ' << x2 << ' ' << s << " :";
        for (std::size_t y = 0; y < sz.y; ++y) os << ' ' << format_double(ch.w(y, x1, x2, s));
        os << '\n';
      }
  if (ch.costs().x1_mean) os << "constraint X1 <= " << format_double(*ch.costs().x1_mean) << '\n';
  if (ch.costs().x2_mean) os << "constraint X2 <= " << format_double(*ch.costs().x2_mean) << '\n';
  return os.str();
}

DmMacChannel load_channel(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open channel file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_channel(ss.str());
}

DmMacChannel binary_example_channel(double p, CostConstraints costs) {
  if (!(p >= 0.0 && p <= 0.5)) throw DomainError("binary example: p must lie in [0, 1/2]");
  const ChannelSizes sz{2, 2, 2, 4};
  std::vector<double> kernel(sz.x1 * sz.x2 * sz.s * sz.y, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t clean = x1 ^ s;
        double* row = &kernel[((x1 * 2 + x2) * 2 + s) * 4];
        row[2 * clean + x2] += 1.0 - p;
        row[2 * (clean ^ 1u) + x2] += p;
      }
  return DmMacChannel(sz, Pmf::uniform(2), std::move(kernel), {2, 2}, costs);
}

DmMacChannel deterministic_channel(
    ChannelSizes sz, Pmf state_prior,
    const std::function<std::size_t(std::size_t, std::size_t, std::size_t)>& f) {
  std::vector<double> kernel(sz.x1 * sz.x2 * sz.s * sz.y, 0.0);
  for (std::size_t x1 = 0; x1 < sz.x1; ++x1)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
      for (std::size_t s = 0; s < sz.s; ++s) {
        const std::size_t y = f(x1, x2, s);
        if (y >= sz.y) throw DomainError("deterministic_channel: output out of range");
        kernel[((x1 * sz.x2 + x2) * sz.s + s) * sz.y + y] = 1.0;
      }
  return DmMacChannel(sz, std::move(state_prior), std::move(kernel));
}

DmMacChannel random_channel(ChannelSizes sz, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<double> prior(sz.s);
  rng.simplex_point(prior);
  std::vector<double> kernel(sz.x1 * sz.x2 * sz.s * sz.y);
  for (std::size_t r = 0; r < sz.x1 * sz.x2 * sz.s; ++r) {
    rng.simplex_point(std::span(kernel).subspan(r * sz.y, sz.y));
  }
  return DmMacChannel(sz, Pmf(std::move(prior)), std::move(kernel));
}

}  // namespace smac
