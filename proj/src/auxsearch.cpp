#include "smac/auxsearch.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>

#include "smac/rng.hpp"

namespace smac {

namespace {

// Upper limit on the structured P_{X1|S,X2} product grid before falling back
// to X1 depending on S only, then to X1 independent of everything.
constexpr std::uint64_t kStructuredBudget = 20000;

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& f) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = n * t / threads; i < n * (t + 1) / threads; ++i) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > kMaxGridPoints / base) return kMaxGridPoints + 1;
    out *= base;
  }
  return out;
}

// Grid for the rows of P_{X1|S,X2}: `rows[s*|X2|+x2]` gives the grid index of
// that row for a mixed-radix counter value.
struct X1RowGrid {
  std::vector<std::vector<double>> grid;
  std::size_t free_rows = 1;       // number of independent rows
  bool depends_on_x2 = false;      // free rows are (s, x2) pairs rather than s
  bool depends_on_s = false;
  std::uint64_t count = 1;

  X1RowGrid(const ChannelSizes& sz, std::size_t levels) : grid(simplex_grid(sz.x1, levels)) {
    const std::uint64_t g = grid.size();
    if (checked_pow(g, sz.s * sz.x2) <= kStructuredBudget) {
      free_rows = sz.s * sz.x2;
      depends_on_x2 = depends_on_s = true;
    } else if (checked_pow(g, sz.s) <= kStructuredBudget) {
      free_rows = sz.s;
      depends_on_s = true;
    }
    count = checked_pow(g, free_rows);
  }

  // Writes P(x1 | s, x2) for counter value `idx` into out[(s*|X2|+x2)*|X1|+x1].
  void fill(const ChannelSizes& sz, std::uint64_t idx, std::vector<double>& out) const {
    std::vector<std::size_t> digit(free_rows);
    for (std::size_t r = free_rows; r-- > 0;) {
      digit[r] = idx % grid.size();
      idx /= grid.size();
    }
    out.assign(sz.s * sz.x2 * sz.x1, 0.0);
    for (std::size_t s = 0; s < sz.s; ++s) {
      for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
        const std::size_t r = depends_on_x2 ? s * sz.x2 + x2 : depends_on_s ? s : 0;
        const auto& row = grid[digit[r]];
        std::copy(row.begin(), row.end(), out.begin() + (s * sz.x2 + x2) * sz.x1);
      }
    }
  }
};

enum class VMode { Degenerate, StateCopy };
enum class UMode { Degenerate, X1Copy };

AuxJoint structured_aux(const ChannelSizes& sz, VMode vm, UMode um, const std::vector<double>& px2,
                        const std::vector<double>& px1) {
  AuxJoint a;
  a.v_size = vm == VMode::StateCopy ? sz.s : 1;
  a.u_size = um == UMode::X1Copy ? sz.x1 : 1;
  a.px2 = px2;
  a.pv_given_sx2.assign(sz.s * sz.x2 * a.v_size, 0.0);
  for (std::size_t s = 0; s < sz.s; ++s)
    for (std::size_t x2 = 0; x2 < sz.x2; ++x2)
      a.pv_given_sx2[(s * sz.x2 + x2) * a.v_size + (vm == VMode::StateCopy ? s : 0)] = 1.0;

  const std::size_t ux = a.u_size * sz.x1;
  a.pux1_given_svx2.assign(sz.s * a.v_size * sz.x2 * ux, 0.0);
  for (std::size_t s = 0; s < sz.s; ++s) {
    for (std::size_t v = 0; v < a.v_size; ++v) {
      for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
        const std::size_t base = ((s * a.v_size + v) * sz.x2 + x2) * ux;
        for (std::size_t x1 = 0; x1 < sz.x1; ++x1) {
          const std::size_t u = um == UMode::X1Copy ? x1 : 0;
          a.pux1_given_svx2[base + u * sz.x1 + x1] = px1[(s * sz.x2 + x2) * sz.x1 + x1];
        }
      }
    }
  }
  return a;
}

void fill_rows(CounterRng& rng, std::vector<double>& v, std::size_t row_len, std::size_t units) {
  for (std::size_t off = 0; off < v.size(); off += row_len) {
    rng.grid_point(std::span<double>(v.data() + off, row_len), units);
  }
}

// Lazily generated sample list shared by the inner-region search.
class AuxSource {
 public:
  AuxSource(const DmMacChannel& ch, const SearchConfig& cfg)
      : sz_(ch.sizes()), cfg_(cfg), caps_(cfg.effective_caps(sz_)), px2_grid_(simplex_grid(sz_.x2, cfg.levels)),
        x1_(sz_, cfg.levels) {
    if (cfg.force_structure) {
      if (cfg.no_v || caps_.v < sz_.s || caps_.u < sz_.x1) {
        throw DomainError("forced structure needs |V| >= |S| and |U| >= |X1|");
      }
      modes_ = {{VMode::StateCopy, UMode::X1Copy}};
    } else {
      const bool v_copy = !cfg.no_v && sz_.s > 1 && caps_.v >= sz_.s;
      const bool u_copy = sz_.x1 > 1 && caps_.u >= sz_.x1;
      for (VMode vm : {VMode::Degenerate, VMode::StateCopy}) {
        if (vm == VMode::StateCopy && !v_copy) continue;
        for (UMode um : {UMode::Degenerate, UMode::X1Copy}) {
          if (um == UMode::X1Copy && !u_copy) continue;
          modes_.emplace_back(vm, um);
        }
      }
    }
    per_mode_ = px2_grid_.size() * x1_.count;
    structured_ = per_mode_ * modes_.size();
    if (structured_ > kMaxGridPoints) throw DomainError("structured sample set exceeds 1e8 points");
    restarts_ = cfg.force_structure ? 0 : cfg.restarts;
  }

  std::size_t size() const { return structured_ + restarts_; }

  AuxJoint at(std::size_t i) const {
    if (i < structured_) {
      const auto [vm, um] = modes_[i / per_mode_];
      const std::size_t j = i % per_mode_;
      std::vector<double> px1;
      x1_.fill(sz_, j % x1_.count, px1);
      return structured_aux(sz_, vm, um, px2_grid_[j / x1_.count], px1);
    }
    CounterRng rng(cfg_.seed, i - structured_);
    AuxJoint a;
    a.u_size = caps_.u;
    a.v_size = caps_.v;
    a.px2.resize(sz_.x2);
    a.pv_given_sx2.resize(sz_.s * sz_.x2 * a.v_size);
    a.pux1_given_svx2.resize(sz_.s * a.v_size * sz_.x2 * a.u_size * sz_.x1);
    fill_rows(rng, a.px2, sz_.x2, cfg_.levels);
    fill_rows(rng, a.pv_given_sx2, a.v_size, cfg_.levels);
    fill_rows(rng, a.pux1_given_svx2, a.u_size * sz_.x1, cfg_.levels);
    return a;
  }

 private:
  ChannelSizes sz_;
  SearchConfig cfg_;
  AuxCaps caps_;
  std::vector<std::vector<double>> px2_grid_;
  X1RowGrid x1_;
  std::vector<std::pair<VMode, UMode>> modes_;
  std::size_t per_mode_ = 0;
  std::size_t structured_ = 0;
  std::size_t restarts_ = 0;
};

std::optional<InnerEvaluation> admissible_eval(const DmMacChannel& ch, const AuxJoint& aux, bool constrained) {
  if (!meets_costs(ch, induced_input_dist(ch.sizes(), aux))) return std::nullopt;
  const InnerEvaluation ev = evaluate_inner(ch, aux);
  if (constrained && ev.compression_slack < -kConstraintSlack) return std::nullopt;
  return ev;
}

// Index of the first sample attaining the maximal support, or nullopt.
template <class Bounds>
std::optional<std::size_t> best_index(const std::vector<std::optional<Bounds>>& evals, const Direction& dir,
                                      double& value) {
  std::optional<std::size_t> best;
  value = kNoSupport;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i]) continue;
    const double v = pentagon_support(*evals[i], dir).value;
    if (v > value) {
      value = v;
      best = i;
    }
  }
  return best;
}

std::vector<std::optional<RateBounds>> evaluate_all(const DmMacChannel& ch, const SearchConfig& cfg,
                                                    const AuxSource& src) {
  std::vector<std::optional<RateBounds>> out(src.size());
  parallel_for(src.size(), cfg.threads, [&](std::size_t i) {
    if (auto ev = admissible_eval(ch, src.at(i), cfg.constrained)) out[i] = ev->bounds;
  });
  return out;
}

std::size_t count_admissible(const auto& evals) {
  return static_cast<std::size_t>(std::count_if(evals.begin(), evals.end(), [](const auto& e) { return e.has_value(); }));
}

SupportPoint support_from(const DmMacChannel& ch, const SearchConfig& cfg, const AuxSource& src,
                          const std::vector<std::optional<RateBounds>>& evals, const Direction& dir) {
  SupportPoint sp;
  sp.dir = dir;
  double value;
  const auto idx = best_index(evals, dir, value);
  if (!idx) return sp;

  AuxJoint witness = src.at(*idx);
  if (cfg.max_iters > 0) witness = coordinate_ascent(ch, witness, dir, cfg.max_iters, cfg.constrained).aux;
  const RateBounds rb = evaluate_inner(ch, witness).bounds;
  const auto ps = pentagon_support(rb, dir);
  sp.value = ps.value;
  sp.point = ps.point;
  sp.bounds = rb;
  sp.witness = std::move(witness);
  sp.sample_index = *idx;
  return sp;
}

}  // namespace

std::uint64_t simplex_grid_size(std::size_t dim, std::size_t levels) {
  if (dim < 1 || levels < 1) throw DomainError("simplex_grid: dim and levels must be >= 1");
  // C(levels + dim - 1, dim - 1), built so every partial value is a binomial.
  std::uint64_t c = 1;
  for (std::size_t i = 1; i < dim; ++i) {
    // c <= 1e8 here, so the product below cannot overflow.
    if (levels > kMaxGridPoints) throw DomainError("simplex_grid: more than 1e8 points");
    c = c * (levels + i) / i;
    if (c > kMaxGridPoints) throw DomainError("simplex_grid: more than 1e8 points");
  }
  return c;
}

std::vector<std::vector<double>> simplex_grid(std::size_t dim, std::size_t levels) {
  std::vector<std::vector<double>> out;
  out.reserve(simplex_grid_size(dim, levels));
  std::vector<std::size_t> comp(dim, 0);
  const double scale = 1.0 / static_cast<double>(levels);
  // Fill position k onwards with `left` units, in lexicographic order.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t left) {
    if (k + 1 == dim) {
      comp[k] = left;
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<double>(comp[i]) * scale;
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      comp[k] = c;
      rec(k + 1, left - c);
    }
  };
  rec(0, levels);
  return out;
}

void SearchConfig::validate(const ChannelSizes& sizes) const {
  if (levels < 2) throw DomainError("search: levels must be >= 2");
  if (!caps) return;
  if (caps->u < 1 || caps->v < 1) throw DomainError("search: caps must be >= 1");
  const AuxCaps limit = constrained ? constrained_region_caps(sizes) : region_caps(sizes);
  if (!allow_large_caps && (caps->u > limit.u || caps->v > limit.v)) {
    throw DomainError("search: caps exceed the sufficient cardinalities (|U| <= " + std::to_string(limit.u) +
                      ", |V| <= " + std::to_string(limit.v) + ")");
  }
}

AuxCaps SearchConfig::effective_caps(const ChannelSizes& sizes) const {
  AuxCaps c = caps ? *caps : constrained ? constrained_region_caps(sizes) : region_caps(sizes);
  if (no_v) c.v = 1;
  return c;
}

std::vector<AuxJoint> aux_samples(const DmMacChannel& ch, const SearchConfig& cfg) {
  cfg.validate(ch.sizes());
  const AuxSource src(ch, cfg);
  std::vector<AuxJoint> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back(src.at(i));
  return out;
}

SupportPoint support_value(const DmMacChannel& ch, const SearchConfig& cfg, const Direction& dir) {
  cfg.validate(ch.sizes());
  const AuxSource src(ch, cfg);
  return support_from(ch, cfg, src, evaluate_all(ch, cfg, src), dir);
}

TraceResult trace_region(const DmMacChannel& ch, const SearchConfig& cfg,
                         const std::vector<Direction>& directions) {
  cfg.validate(ch.sizes());
  const AuxSource src(ch, cfg);
  const auto evals = evaluate_all(ch, cfg, src);

  TraceResult out;
  out.samples = src.size();
  out.admissible = count_admissible(evals);
  out.supports.resize(directions.size());
  SearchConfig inner = cfg;
  inner.threads = 1;
  parallel_for(directions.size(), cfg.max_iters > 0 ? cfg.threads : 1, [&](std::size_t k) {
    out.supports[k] = support_from(ch, inner, src, evals, directions[k]);
  });

  std::vector<double> levels;
  for (const auto& sp : out.supports) levels.push_back(sp.value);
  out.polygon = halfplane_region(directions, levels);
  return out;
}

AscentResult coordinate_ascent(const DmMacChannel& ch, const AuxJoint& aux0, const Direction& dir,
                               std::size_t max_iters, bool constrained) {
  const auto& sz = ch.sizes();
  aux0.validate(sz);
  AscentResult r{aux0, {}};
  AuxJoint& a = r.aux;

  auto objective = [&]() {
    const auto ev = admissible_eval(ch, a, constrained);
    return ev ? pentagon_support(ev->bounds, dir).value : kNoSupport;
  };

  struct Row {
    std::vector<double>* vec;
    std::size_t off, len;
  };
  std::vector<Row> rows{{&a.px2, 0, a.px2.size()}};
  for (std::size_t off = 0; off < a.pv_given_sx2.size(); off += a.v_size) rows.push_back({&a.pv_given_sx2, off, a.v_size});
  const std::size_t ux = a.u_size * sz.x1;
  for (std::size_t off = 0; off < a.pux1_given_svx2.size(); off += ux) rows.push_back({&a.pux1_given_svx2, off, ux});

  double cur = objective();
  r.history.push_back(cur);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    const double start = cur;
    for (const Row& row : rows) {
      double* p = row.vec->data() + row.off;
      double step = 0.25;
      for (int halving = 0; halving <= 5; ++halving, step *= 0.5) {
        for (int guard = 0; guard < 64; ++guard) {
          double best = cur;
          std::size_t bi = 0, bj = 0;
          for (std::size_t i = 0; i < row.len; ++i) {
            if (p[i] <= 0.0) continue;
            for (std::size_t j = 0; j < row.len; ++j) {
              if (j == i) continue;
              const double pi = p[i], pj = p[j];
              const double t = std::min(step, pi);
              p[i] = t == pi ? 0.0 : pi - t;
              p[j] = pj + t;
              const double v = objective();
              p[i] = pi;
              p[j] = pj;
              if (v > best) {
                best = v;
                bi = i;
                bj = j;
              }
            }
          }
          if (!(best > cur)) break;
          const double t = std::min(step, p[bi]);
          p[bi] = t == p[bi] ? 0.0 : p[bi] - t;
          p[bj] += t;
          cur = best;
        }
      }
    }
    r.history.push_back(cur);
    if (!(cur > start)) break;
  }
  return r;
}

CmSearchResult cm_capacity_search(const DmMacChannel& ch, const SearchConfig& cfg) {
  const auto& sz = ch.sizes();
  if (cfg.levels < 2) throw DomainError("search: levels must be >= 2");
  const std::size_t kcap = cfg.caps ? cfg.caps->u : sz.inputs_and_state() + 1;
  if (kcap < 1) throw DomainError("search: |K| must be >= 1");

  const auto px2_grid = simplex_grid(sz.x2, cfg.levels);
  const X1RowGrid x1(sz, cfg.levels);
  // K constant, a copy of X1, of S, or of (S, X1).
  std::vector<std::size_t> kmodes{0};
  if (sz.x1 > 1 && kcap >= sz.x1) kmodes.push_back(1);
  if (sz.s > 1 && kcap >= sz.s) kmodes.push_back(2);
  if (sz.s > 1 && sz.x1 > 1 && kcap >= sz.s * sz.x1) kmodes.push_back(3);
  const std::size_t per_mode = px2_grid.size() * x1.count;
  const std::size_t structured = per_mode * kmodes.size();
  const std::size_t total = structured + (cfg.force_structure ? 0 : cfg.restarts);

  auto sample = [&](std::size_t i) {
    CommonMsgAux k;
    if (i < structured) {
      const std::size_t mode = kmodes[i / per_mode];
      const std::size_t j = i % per_mode;
      std::vector<double> px1;
      x1.fill(sz, j % x1.count, px1);
      k.px2 = px2_grid[j / x1.count];
      k.k_size = mode == 0 ? 1 : mode == 1 ? sz.x1 : mode == 2 ? sz.s : sz.s * sz.x1;
      k.pkx1_given_sx2.assign(sz.s * sz.x2 * k.k_size * sz.x1, 0.0);
      for (std::size_t s = 0; s < sz.s; ++s) {
        for (std::size_t x2 = 0; x2 < sz.x2; ++x2) {
          for (std::size_t a = 0; a < sz.x1; ++a) {
            const std::size_t kk = mode == 0 ? 0 : mode == 1 ? a : mode == 2 ? s : s * sz.x1 + a;
            k.pkx1_given_sx2[(s * sz.x2 + x2) * k.k_size * sz.x1 + kk * sz.x1 + a] = px1[(s * sz.x2 + x2) * sz.x1 + a];
          }
        }
      }
      return k;
    }
    CounterRng rng(cfg.seed, i - structured);
    k.k_size = kcap;
    k.px2.resize(sz.x2);
    k.pkx1_given_sx2.resize(sz.s * sz.x2 * kcap * sz.x1);
    fill_rows(rng, k.px2, sz.x2, cfg.levels);
    fill_rows(rng, k.pkx1_given_sx2, kcap * sz.x1, cfg.levels);
    return k;
  };

  std::vector<double> values(total, kNoSupport);
  parallel_for(total, cfg.threads, [&](std::size_t i) {
    const CommonMsgAux k = sample(i);
    if (meets_costs(ch, induced_input_dist(sz, k))) values[i] = cm_capacity_value(ch, k);
  });

  CmSearchResult out;
  for (std::size_t i = 0; i < total; ++i) {
    if (values[i] > out.value) {
      out.value = values[i];
      out.witness = sample(i);
    }
  }
  return out;
}

namespace {

class InputSource {
 public:
  InputSource(const DmMacChannel& ch, const SearchConfig& cfg)
      : sz_(ch.sizes()), cfg_(cfg), px2_grid_(simplex_grid(sz_.x2, cfg.levels)), x1_(sz_, cfg.levels) {
    structured_ = px2_grid_.size() * x1_.count;
  }

  std::size_t size() const { return structured_ + (cfg_.force_structure ? 0 : cfg_.restarts); }

  InputDist at(std::size_t i) const {
    InputDist d;
    if (i < structured_) {
      d.px2 = px2_grid_[i / x1_.count];
      // x1_.fill lays rows out as (s, x2); InputDist rows are (x2, s).
      std::vector<double> rows;
      x1_.fill(sz_, i % x1_.count, rows);
      d.px1_given_x2s.resize(rows.size());
      for (std::size_t s = 0; s < sz_.s; ++s)
        for (std::size_t x2 = 0; x2 < sz_.x2; ++x2)
          std::copy_n(rows.begin() + (s * sz_.x2 + x2) * sz_.x1, sz_.x1,
                      d.px1_given_x2s.begin() + (x2 * sz_.s + s) * sz_.x1);
      return d;
    }
    CounterRng rng(cfg_.seed, i - structured_);
    d.px2.resize(sz_.x2);
    d.px1_given_x2s.resize(sz_.x2 * sz_.s * sz_.x1);
    fill_rows(rng, d.px2, sz_.x2, cfg_.levels);
    fill_rows(rng, d.px1_given_x2s, sz_.x1, cfg_.levels);
    return d;
  }

 private:
  ChannelSizes sz_;
  SearchConfig cfg_;
  std::vector<std::vector<double>> px2_grid_;
  X1RowGrid x1_;
  std::size_t structured_ = 0;
};

}  // namespace

std::vector<InputDist> input_samples(const DmMacChannel& ch, const SearchConfig& cfg) {
  cfg.validate(ch.sizes());
  const InputSource src(ch, cfg);
  std::vector<InputDist> out;
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back(src.at(i));
  return out;
}

OuterTraceResult trace_outer(const DmMacChannel& ch, const SearchConfig& cfg,
                             const std::vector<Direction>& directions) {
  cfg.validate(ch.sizes());
  const InputSource src(ch, cfg);
  std::vector<std::optional<RateBounds>> evals(src.size());
  parallel_for(src.size(), cfg.threads, [&](std::size_t i) {
    const InputDist d = src.at(i);
    if (meets_costs(ch, d)) evals[i] = outer_bounds_t3(ch, d);
  });

  OuterTraceResult out;
  out.samples = src.size();
  out.admissible = count_admissible(evals);
  std::vector<double> levels;
  for (const auto& dir : directions) {
    OuterSupportPoint sp;
    sp.dir = dir;
    double value;
    if (const auto idx = best_index(evals, dir, value)) {
      const auto ps = pentagon_support(*evals[*idx], dir);
      sp.value = ps.value;
      sp.point = ps.point;
      sp.bounds = *evals[*idx];
      sp.witness = src.at(*idx);
      sp.sample_index = *idx;
    }
    levels.push_back(sp.value);
    out.supports.push_back(std::move(sp));
  }
  out.polygon = halfplane_region(directions, levels);
  return out;
}

}  // namespace smac
