#include "smac/fme.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace smac::fme {

// ---------------------------------------------------------------------------
// Variable sets and expressions.

VarSet make_varset(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_proper_subset(const VarSet& a, const VarSet& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

InfoExpr InfoExpr::entropy(const VarSet& atom, Rational coef) {
  InfoExpr e;
  e.add(atom, coef);
  return e;
}

void InfoExpr::add(const VarSet& atom, const Rational& coef) {
  if (atom.empty() || coef == 0) return;  // H(empty) = 0
  auto [it, inserted] = terms_.try_emplace(atom, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational InfoExpr::coefficient(const VarSet& atom) const {
  auto it = terms_.find(atom);
  return it == terms_.end() ? Rational(0) : it->second;
}

InfoExpr& InfoExpr::operator+=(const InfoExpr& o) {
  for (const auto& [atom, c] : o.terms_) add(atom, c);
  return *this;
}

InfoExpr& InfoExpr::operator-=(const InfoExpr& o) {
  for (const auto& [atom, c] : o.terms_) add(atom, -c);
  return *this;
}

InfoExpr& InfoExpr::operator*=(const Rational& k) {
  if (k == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [atom, c] : terms_) c *= k;
  return *this;
}

InfoExpr expand_mi(const VarSet& a, const VarSet& b, const VarSet& c) {
  if (a.empty() || b.empty()) throw FmeError("mutual information needs nonempty groups");
  if (!set_intersection(a, b).empty() || !set_intersection(a, c).empty() ||
      !set_intersection(b, c).empty()) {
    throw FmeError("mutual information groups must be disjoint");
  }
  InfoExpr e;
  e.add(set_union(a, c), 1);
  e.add(set_union(b, c), 1);
  e.add(set_union(set_union(a, b), c), -1);
  e.add(c, -1);
  return e;
}

InfoExpr apply_independence(const InfoExpr& e, std::span<const IndependenceFact> facts) {
  InfoExpr out = e;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& f : facts) {
      const VarSet joint = set_union(f.a, f.b);
      const Rational c = out.coefficient(joint);
      if (c == 0) continue;
      out.add(joint, -c);
      out.add(f.a, c);
      out.add(f.b, c);
      changed = true;
    }
  }
  return out;
}

bool shannon_nonnegative(const InfoExpr& expr) {
  InfoExpr e = expr;
  for (int iter = 0; iter < 10000; ++iter) {
    if (e.is_zero()) return true;

    // Largest atom; positive atoms win ties.
    const std::pair<const VarSet, Rational>* top = nullptr;
    for (const auto& t : e.terms()) {
      if (!top || t.first.size() > top->first.size() ||
          (t.first.size() == top->first.size() && t.second > 0 && top->second < 0)) {
        top = &t;
      }
    }
    const VarSet x = top->first;
    const Rational c = top->second;

    if (c > 0) {
      // Absorb as H(x | n) with the largest negative proper subset n, else H(x).
      const VarSet* best = nullptr;
      Rational nc = 0;
      for (const auto& [atom, k] : e.terms()) {
        if (k < 0 && is_proper_subset(atom, x) && (!best || atom.size() > best->size())) {
          best = &atom;
          nc = -k;
        }
      }
      if (best) {
        const Rational t = std::min(c, nc);
        const VarSet n = *best;
        e.add(x, -t);
        e.add(n, t);
      } else {
        e.add(x, -c);
      }
      continue;
    }

    // Negative top atom: match -H(x) with I(p1 \ m; p2 \ m | m), p1 u p2 = x.
    std::optional<std::pair<VarSet, VarSet>> pair;
    Rational t = -c;
    for (auto i = e.terms().begin(); i != e.terms().end() && !pair; ++i) {
      if (i->second <= 0 || !is_proper_subset(i->first, x)) continue;
      for (auto j = std::next(i); j != e.terms().end(); ++j) {
        if (j->second <= 0 || !is_proper_subset(j->first, x)) continue;
        if (set_union(i->first, j->first) != x) continue;
        pair.emplace(i->first, j->first);
        t = std::min({t, i->second, j->second});
        break;
      }
    }
    if (!pair) return false;
    const VarSet meet = set_intersection(pair->first, pair->second);
    e.add(pair->first, -t);
    e.add(pair->second, -t);
    e.add(x, t);
    e.add(meet, t);
  }
  return false;
}

bool IneqSystem::is_nonneg(const std::string& rate) const {
  return std::find(nonneg.begin(), nonneg.end(), rate) != nonneg.end();
}

// ---------------------------------------------------------------------------
// Rendering.

namespace {

std::string rational_str(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Appends "+ 2*x", "- x", or for the first term "x", "-x", "1/2*x".
void append_term(std::string& out, bool first, const Rational& c, const std::string& name) {
  const bool neg = c < 0;
  const Rational mag = neg ? Rational(-c) : c;
  if (first) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  if (mag != 1) out += rational_str(mag) + "*";
  out += name;
}

std::string atom_str(const VarSet& atom) {
  std::string s = "H(";
  for (std::size_t i = 0; i < atom.size(); ++i) {
    if (i) s += ",";
    s += atom[i];
  }
  return s + ")";
}

std::vector<std::string> ordered_rates(const std::map<std::string, Rational>& lhs,
                                       const std::vector<std::string>& order) {
  std::vector<std::string> out;
  for (const auto& r : order)
    if (lhs.count(r)) out.push_back(r);
  for (const auto& [r, c] : lhs)
    if (std::find(order.begin(), order.end(), r) == order.end()) out.push_back(r);
  return out;
}

std::string render_lhs(const RateIneq& q, const std::vector<std::string>& order) {
  std::string out;
  bool first = true;
  for (const auto& r : ordered_rates(q.lhs, order)) {
    append_term(out, first, q.lhs.at(r), r);
    first = false;
  }
  return first ? "0" : out;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string render_expr(const InfoExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [atom, c] : e.terms()) {
    append_term(out, first, c, atom_str(atom));
    first = false;
  }
  return out;
}

std::string render_inequality(const RateIneq& ineq, const std::vector<std::string>& rate_order) {
  return render_lhs(ineq, rate_order) + " <= " + render_expr(ineq.rhs);
}

std::string render_system(const IneqSystem& sys) {
  std::ostringstream os;
  if (sys.relaxed_strict) os << "# strict inequalities relaxed to non-strict\n";
  if (!sys.rates.empty()) os << "rates " << join(sys.rates, " ") << '\n';
  if (!sys.nonneg.empty()) os << "nonneg " << join(sys.nonneg, " ") << '\n';
  for (const auto& f : sys.facts) os << "fact " << join(f.a, ",") << " _|_ " << join(f.b, ",") << '\n';
  if (!sys.eliminate.empty()) os << "eliminate " << join(sys.eliminate, " ") << '\n';
  for (const auto& q : sys.inequalities) os << render_inequality(q, sys.rates) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Canonical form, elimination, pruning.

namespace {

void normalize(RateIneq& q, const std::vector<std::string>& order) {
  for (auto it = q.lhs.begin(); it != q.lhs.end();) {
    it = it->second == 0 ? q.lhs.erase(it) : std::next(it);
  }
  Rational lead = 0;
  const auto rates = ordered_rates(q.lhs, order);
  if (!rates.empty()) {
    lead = q.lhs.at(rates.front());
  } else if (!q.rhs.is_zero()) {
    lead = q.rhs.terms().begin()->second;
  }
  if (lead == 0) return;
  const Rational scale = 1 / (lead < 0 ? Rational(-lead) : lead);
  if (scale == 1) return;
  for (auto& [r, c] : q.lhs) c *= scale;
  q.rhs *= scale;
}

}  // namespace

IneqSystem canonicalize(IneqSystem sys) {
  std::vector<std::string> nonneg;
  for (const auto& r : sys.rates)
    if (sys.is_nonneg(r)) nonneg.push_back(r);
  for (const auto& r : sys.nonneg)
    if (std::find(nonneg.begin(), nonneg.end(), r) == nonneg.end()) nonneg.push_back(r);
  sys.nonneg = std::move(nonneg);

  std::vector<std::pair<std::pair<std::string, std::string>, RateIneq>> keyed;
  for (auto& q : sys.inequalities) {
    q.rhs = apply_independence(q.rhs, sys.facts);
    normalize(q, sys.rates);
    keyed.push_back({{render_lhs(q, sys.rates), render_expr(q.rhs)}, std::move(q)});
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  sys.inequalities.clear();
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].second == keyed[i - 1].second) continue;
    sys.inequalities.push_back(std::move(keyed[i].second));
  }
  return sys;
}

IneqSystem fme_eliminate(const IneqSystem& sys, const std::string& var) {
  std::vector<const RateIneq*> upper, lower;
  std::vector<RateIneq> kept;
  for (const auto& q : sys.inequalities) {
    auto it = q.lhs.find(var);
    if (it == q.lhs.end() || it->second == 0) {
      kept.push_back(q);
    } else if (it->second > 0) {
      upper.push_back(&q);
    } else {
      lower.push_back(&q);
    }
  }
  if (upper.empty() && lower.empty()) return sys;

  RateIneq zero_floor;  // -var <= 0
  zero_floor.lhs[var] = -1;
  if (sys.is_nonneg(var)) lower.push_back(&zero_floor);

  for (const RateIneq* u : upper) {
    for (const RateIneq* l : lower) {
      const Rational cu = u->lhs.at(var);
      const Rational cl = -l->lhs.at(var);
      RateIneq combined;
      for (const auto& [r, c] : u->lhs)
        if (r != var) combined.lhs[r] += cl * c;
      for (const auto& [r, c] : l->lhs)
        if (r != var) combined.lhs[r] += cu * c;
      combined.rhs = cl * u->rhs + cu * l->rhs;
      kept.push_back(std::move(combined));
    }
  }

  IneqSystem out = sys;
  out.inequalities = std::move(kept);
  std::erase(out.rates, var);
  std::erase(out.nonneg, var);
  std::erase(out.eliminate, var);
  return canonicalize(std::move(out));
}

namespace {

// q is implied by p: same right side, and p's left side exceeds q's only on
// nonnegative rates.
bool dominates(const RateIneq& p, const RateIneq& q, const IneqSystem& sys) {
  if (p == q || !(p.rhs == q.rhs)) return false;
  std::vector<std::string> names;
  for (const auto& [r, c] : p.lhs) names.push_back(r);
  for (const auto& [r, c] : q.lhs) names.push_back(r);
  for (const auto& r : names) {
    const Rational pc = p.lhs.count(r) ? p.lhs.at(r) : Rational(0);
    const Rational qc = q.lhs.count(r) ? q.lhs.at(r) : Rational(0);
    if (pc < qc) return false;
    if (pc > qc && !sys.is_nonneg(r)) return false;
  }
  return true;
}

}  // namespace

IneqSystem prune_redundant(const IneqSystem& input) {
  IneqSystem sys = canonicalize(input);
  const auto& qs = sys.inequalities;
  std::vector<RateIneq> kept;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (qs[i].lhs.empty() && shannon_nonnegative(qs[i].rhs)) continue;
    bool implied = false;
    for (std::size_t j = 0; j < qs.size() && !implied; ++j) {
      implied = j != i && dominates(qs[j], qs[i], sys);
    }
    if (!implied) kept.push_back(qs[i]);
  }
  sys.inequalities = std::move(kept);
  return sys;
}

IneqSystem reduce(const IneqSystem& input) {
  IneqSystem sys = prune_redundant(input);
  const auto order = sys.eliminate;
  for (const auto& var : order) {
    sys = prune_redundant(fme_eliminate(sys, var));
    std::erase(sys.eliminate, var);
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Parsing.

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char ch = line[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == '#') {
      break;
    } else if (line.substr(i, 3) == "_|_") {
      out.push_back({Tok::Symbol, "_|_", i + 1});
      i += 3;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), i + 1});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back({Tok::Number, std::string(line.substr(i, j - i)), i + 1});
      i = j;
    } else if (line.substr(i, 2) == "<=" || line.substr(i, 2) == ">=") {
      out.push_back({Tok::Symbol, std::string(line.substr(i, 2)), i + 1});
      i += 2;
    } else if (std::string_view("+-*/(),;|<>").find(ch) != std::string_view::npos) {
      out.push_back({Tok::Symbol, std::string(1, ch), i + 1});
      ++i;
    } else {
      throw ParseError(lineno, i + 1, std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back({Tok::End, "", line.size() + 1});
  return out;
}

struct Side {
  std::map<std::string, Rational> rates;
  InfoExpr info;
};

class LineParser {
 public:
  LineParser(std::vector<Token> toks, std::size_t lineno, const IneqSystem& sys)
      : toks_(std::move(toks)), lineno_(lineno), sys_(sys) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_symbol(const char* s) const { return peek().kind == Tok::Symbol && peek().text == s; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(lineno_, peek().column, what); }

  void expect(const char* s) {
    if (!is_symbol(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected a name");
    return next().text;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    while (!at_end()) out.push_back(ident());
    return out;
  }

  VarSet group() {
    std::vector<std::string> names{ident()};
    while (is_symbol(",")) {
      ++pos_;
      names.push_back(ident());
    }
    return make_varset(std::move(names));
  }

  Rational number() {
    if (peek().kind != Tok::Number) fail("expected a number");
    Rational r(boost::multiprecision::cpp_int(next().text));
    if (is_symbol("/")) {
      ++pos_;
      if (peek().kind != Tok::Number) fail("expected a denominator");
      const boost::multiprecision::cpp_int den(peek().text);
      if (den == 0) fail("zero denominator");
      ++pos_;
      r /= Rational(den);
    }
    return r;
  }

  InfoExpr info_term(const std::string& kind) {
    expect("(");
    const std::size_t col = peek().column;
    InfoExpr e;
    try {
      if (kind == "I") {
        const VarSet a = group();
        expect(";");
        const VarSet b = group();
        VarSet c;
        if (is_symbol("|")) {
          ++pos_;
          c = group();
        }
        e = expand_mi(a, b, c);
      } else {
        const VarSet a = group();
        VarSet c;
        if (is_symbol("|")) {
          ++pos_;
          c = group();
        }
        e = InfoExpr::entropy(set_union(a, c));
        e.add(c, -1);
      }
    } catch (const FmeError& err) {
      throw ParseError(lineno_, col, err.what());
    }
    expect(")");
    return e;
  }

  Side side() {
    Side s;
    bool first = true;
    for (;;) {
      Rational sign = 1;
      if (is_symbol("+") || is_symbol("-")) {
        if (next().text == "-") sign = -1;
      } else if (!first) {
        break;
      }
      first = false;

      Rational coef = sign;
      if (peek().kind == Tok::Number) {
        const std::size_t col = peek().column;
        coef *= number();
        if (is_symbol("*")) {
          ++pos_;
        } else {
          if (coef != 0) throw ParseError(lineno_, col, "constant terms other than 0 are not supported");
          continue;
        }
      }
      const Token name = peek();
      if (name.kind != Tok::Ident) fail("expected a rate or an information term");
      ++pos_;
      if ((name.text == "I" || name.text == "H") && is_symbol("(")) {
        s.info += info_term(name.text) * coef;
      } else {
        if (std::find(sys_.rates.begin(), sys_.rates.end(), name.text) == sys_.rates.end()) {
          throw ParseError(lineno_, name.column, "undeclared rate '" + name.text + "'");
        }
        s.rates[name.text] += coef;
      }
    }
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t lineno_;
  const IneqSystem& sys_;
};

}  // namespace

IneqSystem parse_system(std::string_view text) {
  IneqSystem sys;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;

    LineParser p(tokenize(line, lineno), lineno, sys);
    if (p.at_end()) continue;

    if (p.peek().kind == Tok::Ident && p.peek().text == "rates") {
      p.next();
      for (auto& r : p.ident_list()) {
        if (r == "I" || r == "H") throw ParseError(lineno, 1, "'I' and 'H' are reserved");
        if (std::find(sys.rates.begin(), sys.rates.end(), r) != sys.rates.end()) {
          throw ParseError(lineno, 1, "rate '" + r + "' declared twice");
        }
        sys.rates.push_back(std::move(r));
      }
      continue;
    }
    if (p.peek().kind == Tok::Ident && (p.peek().text == "nonneg" || p.peek().text == "eliminate")) {
      const bool nonneg = p.next().text == "nonneg";
      while (!p.at_end()) {
        const auto col = p.peek().column;
        auto r = p.ident();
        if (std::find(sys.rates.begin(), sys.rates.end(), r) == sys.rates.end()) {
          throw ParseError(lineno, col, "undeclared rate '" + r + "'");
        }
        auto& list = nonneg ? sys.nonneg : sys.eliminate;
        if (std::find(list.begin(), list.end(), r) == list.end()) list.push_back(std::move(r));
      }
      continue;
    }
    if (p.peek().kind == Tok::Ident && p.peek().text == "fact") {
      p.next();
      IndependenceFact f;
      f.a = p.group();
      p.expect("_|_");
      f.b = p.group();
      if (!set_intersection(f.a, f.b).empty()) p.fail("independent groups must be disjoint");
      if (!p.at_end()) p.fail("unexpected trailing input");
      sys.facts.push_back(std::move(f));
      continue;
    }

    Side left = p.side();
    std::string rel;
    if (p.is_symbol("<=") || p.is_symbol(">=") || p.is_symbol("<") || p.is_symbol(">")) {
      rel = p.next().text;
    } else {
      p.fail("expected a relation (<=, >=, <, >)");
    }
    Side right = p.side();
    if (!p.at_end()) p.fail("unexpected trailing input");

    if (rel == "<" || rel == ">") sys.relaxed_strict = true;
    if (rel == ">=" || rel == ">") std::swap(left, right);
    RateIneq q;
    q.lhs = left.rates;
    for (const auto& [r, c] : right.rates) q.lhs[r] -= c;
    q.rhs = right.info - left.info;
    for (auto it = q.lhs.begin(); it != q.lhs.end();) {
      it = it->second == 0 ? q.lhs.erase(it) : std::next(it);
    }
    if (q.lhs.empty() && q.rhs.is_zero()) continue;  // 0 <= 0
    sys.inequalities.push_back(std::move(q));
  }
  return sys;
}

}  // namespace smac::fme
