#pragma once

// Symbolic Fourier-Motzkin elimination over rate inequalities whose right-hand
// sides are rational combinations of joint-entropy atoms H(A).
//
// System file grammar (one statement per line, '#' starts a comment):
//
//   rates R0 R1 Rc Rhat          declares rate variables (rendering order)
//   nonneg Rc R1                 rates known to be >= 0
//   fact S _|_ X2                independence: H(S,X2) = H(S) + H(X2)
//   eliminate R0 Rhat            variables to project out, in order
//   Rc + R1 <= I(U,V,X2;Y) - I(U;S|V,X2)
//
// Either side of an inequality may mix rate terms and information terms
// I(A;B|C), I(A;B), H(A|B), H(A), each with an optional integer or rational
// coefficient ("2*", "1/2*"); relations are <=, >=, < and >. Strict relations
// are relaxed to non-strict ones. The canonical form moves rates left and
// information terms right and writes the right side in entropy atoms.

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace smac::fme {

using Rational = boost::multiprecision::cpp_rational;

// Sorted, duplicate-free, nonempty set of random-variable names.
using VarSet = std::vector<std::string>;

VarSet make_varset(std::vector<std::string> names);
VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
bool is_proper_subset(const VarSet& a, const VarSet& b);

class InfoExpr {
 public:
  InfoExpr() = default;

  static InfoExpr entropy(const VarSet& atom, Rational coef = 1);

  void add(const VarSet& atom, const Rational& coef);
  Rational coefficient(const VarSet& atom) const;
  const std::map<VarSet, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  InfoExpr& operator+=(const InfoExpr& o);
  InfoExpr& operator-=(const InfoExpr& o);
  InfoExpr& operator*=(const Rational& k);
  friend InfoExpr operator+(InfoExpr a, const InfoExpr& b) { return a += b; }
  friend InfoExpr operator-(InfoExpr a, const InfoExpr& b) { return a -= b; }
  friend InfoExpr operator*(InfoExpr a, const Rational& k) { return a *= k; }
  friend InfoExpr operator*(const Rational& k, InfoExpr a) { return a *= k; }
  friend bool operator==(const InfoExpr&, const InfoExpr&) = default;

 private:
  std::map<VarSet, Rational> terms_;  // no zero coefficients, no empty atom
};

class FmeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// I(a;b|c) = H(a,c) + H(b,c) - H(a,b,c) - H(c). Groups must be disjoint and
// a, b nonempty.
InfoExpr expand_mi(const VarSet& a, const VarSet& b, const VarSet& c = {});

struct IndependenceFact {
  VarSet a;
  VarSet b;

  friend bool operator==(const IndependenceFact&, const IndependenceFact&) = default;
};

// Rewrites every atom H(a u b) as H(a) + H(b), to a fixpoint.
InfoExpr apply_independence(const InfoExpr& e, std::span<const IndependenceFact> facts);

// Greedy certificate that `e` is a nonnegative combination of entropies and
// conditional mutual informations. False means "not certified", not "false".
bool shannon_nonnegative(const InfoExpr& e);

// sum_r lhs[r] * r <= rhs.
struct RateIneq {
  std::map<std::string, Rational> lhs;
  InfoExpr rhs;

  friend bool operator==(const RateIneq&, const RateIneq&) = default;
};

struct IneqSystem {
  std::vector<std::string> rates;
  std::vector<std::string> nonneg;
  std::vector<IndependenceFact> facts;
  std::vector<std::string> eliminate;
  std::vector<RateIneq> inequalities;
  bool relaxed_strict = false;  // some strict relation was relaxed

  bool is_nonneg(const std::string& rate) const;
  friend bool operator==(const IneqSystem& a, const IneqSystem& b) {
    return a.rates == b.rates && a.nonneg == b.nonneg && a.facts == b.facts &&
           a.eliminate == b.eliminate && a.inequalities == b.inequalities;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

IneqSystem parse_system(std::string_view text);
std::string render_system(const IneqSystem& sys);
std::string render_inequality(const RateIneq& ineq, const std::vector<std::string>& rate_order);
std::string render_expr(const InfoExpr& e);

// Independence substitution, positive rescaling (leading coefficient +-1),
// duplicate removal and canonical ordering.
IneqSystem canonicalize(IneqSystem sys);

// Projects `var` out by pairing its upper and lower bounds; nonnegativity of
// `var` contributes the lower bound 0. Absent variables leave the system as is.
IneqSystem fme_eliminate(const IneqSystem& sys, const std::string& var);

// Drops inequalities implied by another with the same right side whose extra
// left-hand terms are nonnegative rates, and "0 <= E" lines with E certified
// nonnegative by shannon_nonnegative.
IneqSystem prune_redundant(const IneqSystem& sys);

// Eliminates every variable listed in sys.eliminate, pruning after each step.
IneqSystem reduce(const IneqSystem& sys);

}  // namespace smac::fme
