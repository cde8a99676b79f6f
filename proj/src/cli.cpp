#include "smac/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "smac/auxsearch.hpp"
#include "smac/binexample.hpp"
#include "smac/dmregion.hpp"
#include "smac/fme.hpp"
#include "smac/gaussregion.hpp"
#include "smac/geom2d.hpp"
#include "smac/macmodel.hpp"

namespace smac::cli {

namespace {

constexpr double kSanityTolerance = 1e-9;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_polygon(std::ostream& os, const RatePolygon& poly) {
  os << "\nvertex,Rc,R1\n";
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    os << i << ',' << fmt6(poly.vertices[i].rc) << ',' << fmt6(poly.vertices[i].r1) << '\n';
  }
}

// The traced polygon lies inside every halfplane it was cut from.
void check_polygon(const RatePolygon& poly, const Direction& dir, double level) {
  if (level == kNoSupport) return;
  if (support(poly, dir) > level + kSanityTolerance) {
    throw SanityError("polygon exceeds its support level in direction (" + fmt6(dir.wc) + ", " + fmt6(dir.w1) + ")");
  }
}

SearchConfig search_config(const DmRegionOptions& opt) {
  SearchConfig cfg;
  cfg.levels = opt.levels;
  cfg.restarts = opt.restarts;
  cfg.seed = opt.seed;
  cfg.max_iters = opt.max_iters;
  cfg.no_v = opt.no_v;
  cfg.constrained = opt.constrained;
  cfg.force_structure = opt.force_structure;
  cfg.allow_large_caps = opt.allow_large_caps;
  cfg.threads = opt.threads;
  return cfg;
}

}  // namespace

std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

Manifest::Manifest(std::string command) {
  add("command", std::move(command));
  add("version", std::string(kToolVersion));
}

Manifest& Manifest::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
  return *this;
}

std::string Manifest::render() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += "# " + k + "=" + v + "\n";
  return out;
}

std::string cmd_dm_region(const DmRegionOptions& opt) {
  const DmMacChannel ch = load_channel(opt.channel_file);
  SearchConfig cfg = search_config(opt);
  AuxCaps caps = cfg.effective_caps(ch.sizes());
  if (opt.umax) caps.u = *opt.umax;
  if (opt.vmax) caps.v = *opt.vmax;
  if (opt.umax || opt.vmax) cfg.caps = caps;
  caps = cfg.effective_caps(ch.sizes());

  const auto dirs = even_directions(opt.directions);
  const TraceResult tr = trace_region(ch, cfg, dirs);

  Manifest m("dm_region");
  m.add("channel", opt.channel_file)
      .add("region", std::string(opt.no_v ? "C'" : "C"))
      .add("levels", opt.levels)
      .add("restarts", opt.force_structure ? std::size_t{0} : opt.restarts)
      .add("seed", std::to_string(opt.seed))
      .add("umax", caps.u)
      .add("vmax", caps.v)
      .add("no_v", opt.no_v)
      .add("constrained", opt.constrained)
      .add("force_structure", opt.force_structure)
      .add("max_iters", opt.max_iters)
      .add("directions", opt.directions)
      .add("samples", tr.samples)
      .add("admissible", tr.admissible)
      .add("caveat", std::string("inner approximation from sampled auxiliary laws; "
                                 "its distance to the exact region is not quantified"));

  std::ostringstream os;
  os << m.render() << "wc,w1,support,Rc,R1\n";
  for (const auto& sp : tr.supports) {
    if (sp.witness) {
      const double again = pentagon_support(inner_bounds(ch, *sp.witness), sp.dir).value;
      if (std::abs(again - sp.value) > 1e-12) throw SanityError("support witness does not reproduce its value");
    }
    check_polygon(tr.polygon, sp.dir, sp.value);
    os << fmt6(sp.dir.wc) << ',' << fmt6(sp.dir.w1) << ',' << fmt6(sp.value) << ',' << fmt6(sp.point.rc) << ','
       << fmt6(sp.point.r1) << '\n';
  }
  write_polygon(os, tr.polygon);
  return os.str();
}

std::string cmd_dm_outer(const DmRegionOptions& opt) {
  const DmMacChannel ch = load_channel(opt.channel_file);
  const SearchConfig cfg = search_config(opt);
  const auto dirs = even_directions(opt.directions);
  const OuterTraceResult tr = trace_outer(ch, cfg, dirs);

  Manifest m("dm_outer");
  m.add("channel", opt.channel_file)
      .add("levels", opt.levels)
      .add("restarts", opt.force_structure ? std::size_t{0} : opt.restarts)
      .add("seed", std::to_string(opt.seed))
      .add("force_structure", opt.force_structure)
      .add("directions", opt.directions)
      .add("samples", tr.samples)
      .add("admissible", tr.admissible)
      .add("caveat", std::string("sampled approximation of the outer boundary; only the per-point "
                                 "bounds are certified"));

  std::ostringstream os;
  os << m.render() << "wc,w1,support,Rc,R1\n";
  for (const auto& sp : tr.supports) {
    check_polygon(tr.polygon, sp.dir, sp.value);
    os << fmt6(sp.dir.wc) << ',' << fmt6(sp.dir.w1) << ',' << fmt6(sp.value) << ',' << fmt6(sp.point.rc) << ','
       << fmt6(sp.point.r1) << '\n';
  }
  write_polygon(os, tr.polygon);
  return os.str();
}

std::string cmd_cm_capacity(const CmCapacityOptions& opt) {
  const DmMacChannel ch = load_channel(opt.channel_file);
  const auto& sz = ch.sizes();
  SearchConfig cfg;
  cfg.levels = opt.levels;
  cfg.restarts = opt.restarts;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  const std::size_t kmax = opt.kmax.value_or(sz.inputs_and_state() + 1);
  cfg.caps = AuxCaps{kmax, 1};
  const CmSearchResult r = cm_capacity_search(ch, cfg);

  Manifest m("cm_capacity");
  m.add("channel", opt.channel_file)
      .add("levels", opt.levels)
      .add("restarts", opt.restarts)
      .add("seed", std::to_string(opt.seed))
      .add("kmax", kmax)
      .add("caveat", std::string("maximum over sampled laws; a lower estimate of the capacity"));

  std::ostringstream os;
  os << m.render() << "C\n" << fmt6(r.value) << '\n';
  if (r.witness) {
    const auto& k = *r.witness;
    if (std::abs(cm_capacity_value(ch, k) - r.value) > 1e-12) throw SanityError("witness does not reproduce C");
    os << "\nx2,P_X2\n";
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2) os << x2 << ',' << fmt6(k.px2[x2]) << '\n';
    os << "\ns,x2,k,x1,P_KX1\n";
    for (std::size_t s = 0; s < sz.s; ++s)
      for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
        for (std::size_t kk = 0; kk < k.k_size; ++kk)
          for (std::size_t x1 = 0; x1 < sz.x1; ++x1) {
            const double p = k.pkx1_given_sx2[(s * sz.x2 + x2) * k.k_size * sz.x1 + kk * sz.x1 + x1];
            if (p > 0.0) os << s << ',' << x2 << ',' << kk << ',' << x1 << ',' << fmt6(p) << '\n';
          }
  }
  return os.str();
}

std::string cmd_binary_example(const BinaryExampleOptions& opt) {
  binary::BinaryParams{opt.p, opt.q1, opt.q2}.validate();
  const bool restrictive = binary::BinaryParams{opt.p, opt.q1, opt.q2}.q2_restrictive();

  std::vector<std::pair<double, double>> rows;
  if (opt.sweep) {
    for (int i = 1; i <= 9; ++i)
      for (int j = 1; j <= 9; ++j) rows.emplace_back(i / 20.0, j / 20.0);
  } else {
    rows.emplace_back(opt.p, opt.q1);
  }

  Manifest m("binary_example");
  if (opt.sweep) {
    m.add("sweep", std::string("p,q1 in {0.05,0.10,...,0.45}"));
  } else {
    m.add("p", opt.p).add("q1", opt.q1);
  }
  m.add("q2", opt.q2).add("levels", opt.levels);
  if (restrictive) {
    m.add("flag", std::string("q2 < 1/2: X2 cannot be uniform, CB and gap are not given by the closed form"));
  }

  std::ostringstream os;
  os << m.render() << "p,q1,CB,RGP,gap,CB_bruteforce\n";
  const double nan = std::nan("");
  for (const auto& [p, q1] : rows) {
    const double cb = restrictive ? nan : binary::cb_capacity(p, q1);
    const double rgp = binary::gp_rate(p, q1);
    const double gap = restrictive ? nan : cb - rgp;
    const double brute = binary::brute_force_cb(p, q1, opt.levels);
    os << fmt6(p) << ',' << fmt6(q1) << ',' << fmt6(cb) << ',' << fmt6(rgp) << ',' << fmt6(gap) << ','
       << fmt6(brute) << '\n';
  }
  return os.str();
}

std::string cmd_gaussian(const GaussianOptions& opt) {
  const gauss::GaussianParams gp{opt.p1, opt.p2, opt.q, opt.n};
  const gauss::SearchOptions so{opt.grid, opt.refine};
  const auto dirs = even_directions(opt.directions);
  const auto region = gauss::gauss_region(gp, so, dirs);
  const auto cm = gauss::gauss_cm_capacity(gp, so);

  Manifest m("gaussian");
  m.add("P1", opt.p1).add("P2", opt.p2).add("Q", opt.q).add("N", opt.n);
  m.add("grid", opt.grid).add("refine", opt.refine).add("directions", opt.directions);

  std::ostringstream os;
  os << m.render() << "wc,w1,support,Rc,R1,rho12,rho1s\n";
  for (const auto& sp : region.supports) {
    check_polygon(region.polygon, sp.dir, sp.value);
    os << fmt6(sp.dir.wc) << ',' << fmt6(sp.dir.w1) << ',' << fmt6(sp.value) << ',' << fmt6(sp.point.rc) << ','
       << fmt6(sp.point.r1) << ',' << fmt6(sp.witness.rho12) << ',' << fmt6(sp.witness.rho1s) << '\n';
  }
  write_polygon(os, region.polygon);
  os << "\nC_G,rho12,rho1s\n"
     << fmt6(cm.value) << ',' << fmt6(cm.witness.rho12) << ',' << fmt6(cm.witness.rho1s) << '\n';
  return os.str();
}

std::string cmd_fme(const std::string& system_file) {
  const auto reduced = fme::reduce(fme::parse_system(read_file(system_file)));
  Manifest m("fme");
  m.add("system", system_file);
  return m.render() + fme::render_system(reduced);
}

std::string cmd_binary_channel(double p, std::optional<double> q1, std::optional<double> q2) {
  const CostConstraints costs{q1, q2};
  return "# binary example channel, p=" + fmt6(p) + "\n" + serialize_channel(binary_example_channel(p, costs));
}

std::string cmd_random_channel(std::size_t s, std::size_t x1, std::size_t x2, std::size_t y, std::uint64_t seed) {
  return "# random channel, seed=" + std::to_string(seed) + "\n" +
         serialize_channel(random_channel(ChannelSizes{s, x1, x2, y}, seed));
}

}  // namespace smac::cli
