#pragma once

// Equational theories and their quotient monads, realized by canonical
// normal forms: `normalize` is the quotient map q, `representative` a
// section of it.

#include "eqlaw/errors.hpp"
#include "eqlaw/polynomial.hpp"
#include "eqlaw/term.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace eqlaw {

// ---------------------------------------------------------------------------
// Equation schemes

/// An equation l = r over metavariables (term positions) and scalar
/// parameters (tokens inside rational indices, as in [a+b] = [a]+[b]).
struct EquationScheme {
  std::string name;
  std::vector<std::string> metavars;
  std::vector<std::string> params;
  Term lhs;
  Term rhs;

  friend bool operator==(const EquationScheme&, const EquationScheme&) = default;
};

inline EquationScheme make_scheme(std::string name, Term lhs, Term rhs) {
  std::vector<std::string> metavars;
  collect_variables(lhs, metavars);
  collect_variables(rhs, metavars);
  std::set<std::string> ps = index_tokens(lhs);
  for (const auto& p : index_tokens(rhs)) ps.insert(p);
  return {std::move(name), std::move(metavars), {ps.begin(), ps.end()}, std::move(lhs), std::move(rhs)};
}

/// The instance of a scheme at the given assignment. Scalar parameters not
/// in `params` stay symbolic.
inline std::pair<Term, Term> instantiate_scheme(const EquationScheme& scheme, const Substitution& assignment,
                                                const std::map<std::string, ScalarPoly>& params = {}) {
  for (const auto& v : scheme.metavars)
    if (!assignment.count(v)) throw unbound_variable(v);
  auto inst = [&](const Term& side) {
    Term t = substitute(side, assignment);
    return params.empty() ? t : substitute_indices(t, params);
  };
  // indices inside the assigned terms are left alone: substitute params
  // on the scheme sides first
  if (!params.empty()) {
    Term l = substitute(substitute_indices(scheme.lhs, params), assignment);
    Term r = substitute(substitute_indices(scheme.rhs, params), assignment);
    return {l, r};
  }
  return {inst(scheme.lhs), inst(scheme.rhs)};
}

// ---------------------------------------------------------------------------
// Normal forms

/// Polynomials with term atoms and coefficients in Q[params].
using SemiringPolynomial = Polynomial<Term, ScalarPoly>;
using AtomWord = std::vector<Term>;

struct ShortLex {
  template <class W>
  bool operator()(const W& a, const W& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Finite languages over atoms: the free idempotent semiring.
using WordSet = std::set<AtomWord, ShortLex>;

class NormalForm {
 public:
  enum class Kind { polynomial, words, term };

  explicit NormalForm(SemiringPolynomial p) : value_(std::move(p)) {}
  explicit NormalForm(WordSet w) : value_(std::move(w)) {}
  explicit NormalForm(Term t) : value_(std::move(t)) {}

  Kind kind() const { return static_cast<Kind>(value_.index()); }
  const SemiringPolynomial& polynomial() const { return std::get<SemiringPolynomial>(value_); }
  const WordSet& words() const { return std::get<WordSet>(value_); }
  const Term& term() const { return std::get<Term>(value_); }

  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.value_ == b.value_; }
  friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }
  friend bool operator<(const NormalForm& a, const NormalForm& b) { return a.value_ < b.value_; }

  std::string to_string(const Signature* sig = nullptr) const {
    switch (kind()) {
      case Kind::polynomial:
        return polynomial().to_string([&](const Term& t) { return eqlaw::to_string(t, sig); });
      case Kind::words: {
        std::string out = "{";
        bool first = true;
        for (const auto& w : words()) {
          if (!first) out += ", ";
          first = false;
          if (w.empty()) out += "eps";
          for (std::size_t i = 0; i < w.size(); ++i) out += (i ? "." : "") + eqlaw::to_string(w[i], sig);
        }
        return out + "}";
      }
      case Kind::term:
        return eqlaw::to_string(term(), sig);
    }
    return {};
  }

 private:
  std::variant<SemiringPolynomial, WordSet, Term> value_;
};

// ---------------------------------------------------------------------------
// Theories

enum class TheoryKind { commutative_semiring, idempotent_semiring, generic };
enum class Equivalence { equal, distinct, unknown };

inline std::string to_string(Equivalence e) {
  switch (e) {
    case Equivalence::equal:
      return "equal";
    case Equivalence::distinct:
      return "distinct";
    case Equivalence::unknown:
      return "unknown";
  }
  return {};
}

/// Which symbols play the semiring roles. Empty names are unused.
struct SemiringRoles {
  std::string plus = "+";
  std::string times = "*";
  std::string scalar;  // rational family (commutative semiring)
  std::string zero;    // nullary symbols (idempotent semiring)
  std::string one;

  friend bool operator==(const SemiringRoles&, const SemiringRoles&) = default;
};

class Theory {
 public:
  virtual ~Theory() = default;

  TheoryKind kind() const { return kind_; }
  const Signature& signature() const { return signature_; }
  const std::vector<EquationScheme>& schemes() const { return schemes_; }

  /// The quotient map q on TX.
  virtual NormalForm normalize(const Term& t) const = 0;
  /// A chosen term of the class; normalize(representative(nf)) == nf.
  virtual Term representative(const NormalForm& nf) const = 0;
  /// A second, differently bracketed representative (for spot checks).
  virtual Term alternative_representative(const NormalForm& nf) const { return representative(nf); }

  virtual Equivalence equiv(const Term& a, const Term& b) const {
    return normalize(a) == normalize(b) ? Equivalence::equal : Equivalence::distinct;
  }

  /// Whether `equiv` never answers unknown.
  virtual bool decidable() const { return true; }

 protected:
  Theory(TheoryKind kind, Signature sig) : kind_(kind), signature_(std::move(sig)) {}

  void check_signature(const Term& t) const {
    try {
      validate(signature_, t);
    } catch (const signature_mismatch& e) {
      throw not_in_theory_signature(e.what());
    }
  }

  TheoryKind kind_;
  Signature signature_;
  std::vector<EquationScheme> schemes_;
};

using TheoryHandle = std::shared_ptr<const Theory>;

inline NormalForm normalize(const Theory& th, const Term& t) { return th.normalize(t); }
inline Equivalence equiv(const Theory& th, const Term& a, const Term& b) { return th.equiv(a, b); }

/// The multiplication of the quotient monad: `outer` has variable leaves
/// standing for the normal forms in `leaves`.
inline NormalForm quotient_mu(const Theory& th, const Term& outer, const std::map<std::string, NormalForm>& leaves) {
  Substitution s;
  for (const auto& x : variables(outer)) {
    auto it = leaves.find(x);
    if (it == leaves.end()) throw unbound_variable(x);
    s.emplace(x, th.representative(it->second));
  }
  return th.normalize(substitute(outer, s));
}

// ---------------------------------------------------------------------------
// Commutative semiring with scalars from Q

class CommutativeSemiring final : public Theory {
 public:
  CommutativeSemiring(Signature sig, SemiringRoles roles) : Theory(TheoryKind::commutative_semiring, std::move(sig)) {
    if (roles.scalar.empty() && signature_.bracket_family()) roles.scalar = signature_.bracket_family()->name;
    roles_ = std::move(roles);
    require_binary(roles_.plus);
    require_binary(roles_.times);
    const auto* fam = signature_.find_family(roles_.scalar);
    if (!fam || fam->domain != IndexDomain::rational)
      throw signature_mismatch("commutative semiring needs a rational scalar family");
    for (const auto* z : {&roles_.zero, &roles_.one})
      if (!z->empty() && (!signature_.find_op(*z) || signature_.find_op(*z)->arity != 0))
        throw signature_mismatch("'" + *z + "' is not a constant");
    build_schemes();
  }

  const SemiringRoles& roles() const { return roles_; }

  NormalForm normalize(const Term& t) const override {
    check_signature(t);
    PolyCache cache;
    return NormalForm(poly(t, cache));
  }

  Term representative(const NormalForm& nf) const override { return build(nf.polynomial(), false); }
  Term alternative_representative(const NormalForm& nf) const override { return build(nf.polynomial(), true); }

 private:
  void require_binary(const std::string& s) const {
    const auto* op = signature_.find_op(s);
    if (!op || op->arity != 2) throw signature_mismatch("'" + s + "' is not a binary symbol");
  }

  Term sc(ScalarPoly p) const { return Term::indexed(roles_.scalar, std::move(p)); }
  Term plus(Term a, Term b) const { return Term::app(roles_.plus, {std::move(a), std::move(b)}); }
  Term times(Term a, Term b) const { return Term::app(roles_.times, {std::move(a), std::move(b)}); }

  void build_schemes() {
    auto v = Term::var("v"), u = Term::var("u"), w = Term::var("w");
    auto a = scalar_token("a"), b = scalar_token("b");
    auto add = [&](std::string n, Term l, Term r) { schemes_.push_back(make_scheme(std::move(n), std::move(l), std::move(r))); };
    add("plus_assoc", plus(plus(v, u), w), plus(v, plus(u, w)));
    add("plus_unit", plus(sc(scalar(0)), v), v);
    add("plus_comm", plus(v, u), plus(u, v));
    add("times_assoc", times(times(v, u), w), times(v, times(u, w)));
    add("times_unit", times(sc(scalar(1)), v), v);
    add("times_comm", times(v, u), times(u, v));
    add("distrib", times(v, plus(u, w)), plus(times(v, u), times(v, w)));
    add("times_zero", times(sc(scalar(0)), v), sc(scalar(0)));
    add("scalar_sum", sc(a + b), plus(sc(a), sc(b)));
    add("scalar_product", sc(a * b), times(sc(a), sc(b)));
  }

  using PolyCache = std::unordered_map<const void*, SemiringPolynomial>;

  SemiringPolynomial poly(const Term& t, PolyCache& cache) const {
    if (t.args().size() > 0) {
      if (auto it = cache.find(t.id()); it != cache.end()) return it->second;
      SemiringPolynomial p = poly_node(t, cache);
      cache.emplace(t.id(), p);
      return p;
    }
    return poly_node(t, cache);
  }

  SemiringPolynomial poly_node(const Term& t, PolyCache& cache) const {
    switch (t.kind()) {
      case Term::Kind::var:
        return SemiringPolynomial::generator(t);
      case Term::Kind::indexed:
        if (t.name() == roles_.scalar) return SemiringPolynomial(*t.scalar_index());
        return SemiringPolynomial::generator(t);
      case Term::Kind::app:
        break;
    }
    if (t.name() == roles_.plus) return poly(t.args()[0], cache) + poly(t.args()[1], cache);
    if (t.name() == roles_.times) return poly(t.args()[0], cache) * poly(t.args()[1], cache);
    if (t.name() == roles_.zero) return {};
    if (t.name() == roles_.one) return SemiringPolynomial(scalar(1));
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(build(poly(a, cache), false));
    return SemiringPolynomial::generator(Term::app(t.name(), std::move(args)));
  }

  Term build(const SemiringPolynomial& p, bool alternative) const {
    if (p.is_zero()) return sc(scalar(0));
    std::vector<Term> summands;
    for (const auto& [mono, coeff] : p.terms()) {
      std::vector<Term> factors(mono.begin(), mono.end());
      if (factors.empty() || coeff != scalar(1)) {
        if (alternative) factors.push_back(sc(coeff));
        else factors.insert(factors.begin(), sc(coeff));
      }
      summands.push_back(fold(factors, alternative, [&](Term x, Term y) { return times(std::move(x), std::move(y)); }));
    }
    if (alternative) std::reverse(summands.begin(), summands.end());
    return fold(summands, alternative, [&](Term x, Term y) { return plus(std::move(x), std::move(y)); });
  }

  /// Right-nested, or left-nested for the alternative bracketing.
  template <class F>
  static Term fold(const std::vector<Term>& xs, bool left, F&& f) {
    if (left) {
      Term acc = xs.front();
      for (std::size_t i = 1; i < xs.size(); ++i) acc = f(acc, xs[i]);
      return acc;
    }
    Term acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = f(xs[i], acc);
    return acc;
  }

  SemiringRoles roles_;
};

// ---------------------------------------------------------------------------
// Idempotent semiring: finite languages over atoms

class IdempotentSemiring final : public Theory {
 public:
  IdempotentSemiring(Signature sig, SemiringRoles roles) : Theory(TheoryKind::idempotent_semiring, std::move(sig)) {
    if (roles.times == "*" && !signature_.find_op("*") && signature_.find_op(".")) roles.times = ".";
    if (roles.zero.empty()) roles.zero = "0";
    if (roles.one.empty()) roles.one = "1";
    roles_ = std::move(roles);
    for (const auto* s : {&roles_.plus, &roles_.times}) {
      const auto* op = signature_.find_op(*s);
      if (!op || op->arity != 2) throw signature_mismatch("'" + *s + "' is not a binary symbol");
    }
    for (const auto* s : {&roles_.zero, &roles_.one}) {
      const auto* op = signature_.find_op(*s);
      if (!op || op->arity != 0) throw signature_mismatch("'" + *s + "' is not a constant");
    }
    build_schemes();
  }

  const SemiringRoles& roles() const { return roles_; }

  NormalForm normalize(const Term& t) const override {
    check_signature(t);
    WordCache cache;
    return NormalForm(words(t, cache));
  }

  Term representative(const NormalForm& nf) const override { return build(nf.words(), false); }
  Term alternative_representative(const NormalForm& nf) const override { return build(nf.words(), true); }

  Term zero() const { return Term::app(roles_.zero); }
  Term one() const { return Term::app(roles_.one); }
  Term plus(Term a, Term b) const { return Term::app(roles_.plus, {std::move(a), std::move(b)}); }
  Term times(Term a, Term b) const { return Term::app(roles_.times, {std::move(a), std::move(b)}); }

 private:
  void build_schemes() {
    auto u = Term::var("u"), v = Term::var("v"), w = Term::var("w");
    auto add = [&](std::string n, Term l, Term r) { schemes_.push_back(make_scheme(std::move(n), std::move(l), std::move(r))); };
    add("plus_assoc", plus(plus(u, v), w), plus(u, plus(v, w)));
    add("plus_comm", plus(u, v), plus(v, u));
    add("plus_idem", plus(u, u), u);
    add("plus_unit", plus(zero(), u), u);
    add("times_assoc", times(times(u, v), w), times(u, times(v, w)));
    add("times_left_unit", times(one(), u), u);
    add("times_right_unit", times(u, one()), u);
    add("times_left_zero", times(zero(), u), zero());
    add("times_right_zero", times(u, zero()), zero());
    add("left_distrib", times(u, plus(v, w)), plus(times(u, v), times(u, w)));
    add("right_distrib", times(plus(u, v), w), plus(times(u, w), times(v, w)));
  }

  using WordCache = std::unordered_map<const void*, WordSet>;

  WordSet words(const Term& t, WordCache& cache) const {
    if (t.args().empty()) return words_node(t, cache);
    if (auto it = cache.find(t.id()); it != cache.end()) return it->second;
    WordSet w = words_node(t, cache);
    cache.emplace(t.id(), w);
    return w;
  }

  WordSet words_node(const Term& t, WordCache& cache) const {
    if (t.is_app()) {
      if (t.name() == roles_.plus) {
        WordSet out = words(t.args()[0], cache);
        for (auto& w : words(t.args()[1], cache)) out.insert(w);
        return out;
      }
      if (t.name() == roles_.times) {
        WordSet left = words(t.args()[0], cache), right = words(t.args()[1], cache), out;
        for (const auto& x : left)
          for (const auto& y : right) {
            AtomWord xy = x;
            xy.insert(xy.end(), y.begin(), y.end());
            out.insert(std::move(xy));
          }
        return out;
      }
      if (t.name() == roles_.zero) return {};
      if (t.name() == roles_.one) return {AtomWord{}};
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(build(words(a, cache), false));
      return {AtomWord{Term::app(t.name(), std::move(args))}};
    }
    return {AtomWord{t}};
  }

  Term build(const WordSet& ws, bool alternative) const {
    if (ws.empty()) return zero();
    std::vector<Term> summands;
    for (const auto& w : ws) {
      if (w.empty()) {
        summands.push_back(one());
        continue;
      }
      Term acc = alternative ? w.front() : w.back();
      if (alternative)
        for (std::size_t i = 1; i < w.size(); ++i) acc = times(acc, w[i]);
      else
        for (std::size_t i = w.size() - 1; i-- > 0;) acc = times(w[i], acc);
      summands.push_back(acc);
    }
    if (alternative) {
      Term acc = summands.back();
      for (std::size_t i = summands.size() - 1; i-- > 0;) acc = plus(acc, summands[i]);
      return acc;
    }
    Term acc = summands.back();
    for (std::size_t i = summands.size() - 1; i-- > 0;) acc = plus(summands[i], acc);
    return acc;
  }

  SemiringRoles roles_;
};

// ---------------------------------------------------------------------------
// Generic theories: bounded rewriting search

/// Interpretation of operation symbols on {0, ..., size-1}. Tables are
/// row-major with the first argument most significant.
struct FiniteModel {
  std::size_t size = 0;
  std::map<std::string, std::vector<std::size_t>> tables;

  friend bool operator==(const FiniteModel&, const FiniteModel&) = default;

  std::optional<std::size_t> evaluate(const Term& t, const std::map<std::string, std::size_t>& env) const {
    if (t.is_var()) {
      auto it = env.find(t.name());
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    if (t.is_indexed()) return std::nullopt;
    auto it = tables.find(t.name());
    if (it == tables.end()) return std::nullopt;
    std::size_t row = 0;
    for (const auto& a : t.args()) {
      auto v = evaluate(a, env);
      if (!v) return std::nullopt;
      row = row * size + *v;
    }
    return it->second.at(row);
  }

  /// Calls f on every assignment of `vars`; stops when f returns true.
  template <class F>
  bool any_assignment(const std::vector<std::string>& vars, F&& f) const {
    std::map<std::string, std::size_t> env;
    std::size_t total = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      total *= size;
      if (total > 1000000) throw invalid_model("too many assignments to enumerate");
    }
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (const auto& v : vars) {
        env[v] = c % size;
        c /= size;
      }
      if (f(env)) return true;
    }
    return false;
  }

  bool satisfies(const EquationScheme& s) const {
    if (!s.params.empty()) return false;
    return !any_assignment(s.metavars, [&](const auto& env) {
      auto l = evaluate(s.lhs, env), r = evaluate(s.rhs, env);
      return !l || !r || *l != *r;
    });
  }

  bool separates(const Term& a, const Term& b) const {
    std::vector<std::string> vars = variables(a);
    collect_variables(b, vars);
    return any_assignment(vars, [&](const auto& env) {
      auto l = evaluate(a, env), r = evaluate(b, env);
      return l && r && *l != *r;
    });
  }
};

struct SearchLimits {
  std::size_t depth = 5;
  std::size_t cap = 10000;

  friend bool operator==(const SearchLimits&, const SearchLimits&) = default;
};

class GenericTheory final : public Theory {
 public:
  GenericTheory(Signature sig, std::vector<EquationScheme> schemes, std::optional<FiniteModel> model = std::nullopt,
                SearchLimits limits = {})
      : Theory(TheoryKind::generic, std::move(sig)), model_(std::move(model)), limits_(limits) {
    schemes_ = std::move(schemes);
    for (const auto& s : schemes_) {
      check_signature(s.lhs);
      check_signature(s.rhs);
      orient(s.lhs, s.rhs);
      orient(s.rhs, s.lhs);
    }
    if (model_) check_model();
  }

  const std::optional<FiniteModel>& model() const { return model_; }
  const SearchLimits& limits() const { return limits_; }
  bool is_free() const { return schemes_.empty(); }

  /// Least term of the explored class (size first, then structure).
  NormalForm normalize(const Term& t) const override {
    check_signature(t);
    if (is_free()) return NormalForm(t);
    auto cls = explore(t).terms;
    return NormalForm(*std::min_element(cls.begin(), cls.end(), shortlex_less));
  }

  Term representative(const NormalForm& nf) const override { return nf.term(); }

  Equivalence equiv(const Term& a, const Term& b) const override {
    check_signature(a);
    check_signature(b);
    if (a == b) return Equivalence::equal;
    if (is_free()) return Equivalence::distinct;
    auto from_a = explore(a);
    if (from_a.terms.count(b)) return Equivalence::equal;
    auto from_b = explore(b);
    for (const auto& t : from_b.terms)
      if (from_a.terms.count(t)) return Equivalence::equal;
    if (model_ && model_->separates(a, b)) return Equivalence::distinct;
    return Equivalence::unknown;
  }

  bool decidable() const override { return is_free(); }

  struct Exploration {
    std::unordered_set<Term, TermHash> terms;
    bool truncated = false;
  };

  /// Breadth-first closure under one-step rewriting in both directions,
  /// bounded by the search limits.
  Exploration explore(const Term& start) const {
    Exploration ex;
    ex.terms.insert(start);
    std::vector<Term> frontier{start};
    for (std::size_t d = 0; d < limits_.depth && !frontier.empty(); ++d) {
      std::vector<Term> next;
      for (const auto& t : frontier)
        for (auto& r : rewrites(t)) {
          if (ex.terms.size() >= limits_.cap) {
            ex.truncated = true;
            return ex;
          }
          if (ex.terms.insert(r).second) next.push_back(std::move(r));
        }
      frontier = std::move(next);
    }
    ex.truncated = ex.truncated || !frontier.empty();
    return ex;
  }

  /// All terms one rewrite step away.
  std::vector<Term> rewrites(const Term& t) const {
    std::vector<Term> out;
    for (const auto& rule : rules_) {
      Binding b;
      if (match(rule.from, t, b)) out.push_back(apply(rule.to, b));
    }
    if (t.is_app())
      for (std::size_t i = 0; i < t.args().size(); ++i)
        for (auto& r : rewrites(t.args()[i])) {
          auto args = t.args();
          args[i] = std::move(r);
          out.push_back(Term::app(t.name(), std::move(args)));
        }
    return out;
  }

 private:
  struct Rule {
    Term from, to;
  };
  struct Binding {
    Substitution vars;
    std::map<std::string, ScalarPoly> params;
  };

  void orient(const Term& from, const Term& to) {
    if (from.is_var()) return;
    auto from_vars = variables(from);
    for (const auto& v : variables(to))
      if (std::find(from_vars.begin(), from_vars.end(), v) == from_vars.end()) return;
    std::set<std::string> bindable;
    std::function<bool(const Term&)> scan = [&](const Term& t) {
      if (const auto* p = t.scalar_index()) {
        if (const auto* g = p->as_generator()) bindable.insert(*g);
        else if (!p->is_constant()) return false;
      }
      for (const auto& a : t.args())
        if (!scan(a)) return false;
      return true;
    };
    if (!scan(from)) return;
    for (const auto& p : index_tokens(to))
      if (!bindable.count(p)) return;
    rules_.push_back({from, to});
  }

  static bool match(const Term& pattern, const Term& t, Binding& b) {
    switch (pattern.kind()) {
      case Term::Kind::var: {
        auto [it, inserted] = b.vars.emplace(pattern.name(), t);
        return inserted || it->second == t;
      }
      case Term::Kind::indexed: {
        if (!t.is_indexed() || t.name() != pattern.name()) return false;
        const auto* pp = pattern.scalar_index();
        const auto* tp = t.scalar_index();
        if (!pp || !tp) return pattern.index() == t.index();
        if (const auto* g = pp->as_generator()) {
          auto [it, inserted] = b.params.emplace(*g, *tp);
          return inserted || it->second == *tp;
        }
        return *pp == *tp;
      }
      case Term::Kind::app:
        break;
    }
    if (!t.is_app() || t.name() != pattern.name() || t.args().size() != pattern.args().size()) return false;
    for (std::size_t i = 0; i < t.args().size(); ++i)
      if (!match(pattern.args()[i], t.args()[i], b)) return false;
    return true;
  }

  static Term apply(const Term& to, const Binding& b) { return substitute(substitute_indices(to, b.params), b.vars); }

  void check_model() const {
    const auto& m = *model_;
    if (m.size == 0) throw invalid_model("model carrier is empty");
    for (const auto& [sym, table] : m.tables) {
      const auto* op = signature_.find_op(sym);
      if (!op) throw invalid_model("model interprets undeclared symbol '" + sym + "'");
      std::size_t rows = 1;
      for (std::size_t i = 0; i < op->arity; ++i) rows *= m.size;
      if (table.size() != rows) throw invalid_model("table for '" + sym + "' has the wrong size");
      for (auto v : table)
        if (v >= m.size) throw invalid_model("table for '" + sym + "' leaves the carrier");
    }
    for (const auto& s : schemes_)
      if (!m.satisfies(s)) throw invalid_model("model does not satisfy equation '" + s.name + "'");
  }

  std::optional<FiniteModel> model_;
  SearchLimits limits_;
  std::vector<Rule> rules_;
};

inline TheoryHandle commutative_semiring(Signature sig, SemiringRoles roles = {}) {
  return std::make_shared<CommutativeSemiring>(std::move(sig), std::move(roles));
}
inline TheoryHandle idempotent_semiring(Signature sig, SemiringRoles roles = {}) {
  return std::make_shared<IdempotentSemiring>(std::move(sig), std::move(roles));
}
inline TheoryHandle generic_theory(Signature sig, std::vector<EquationScheme> schemes,
                                   std::optional<FiniteModel> model = std::nullopt, SearchLimits limits = {}) {
  return std::make_shared<GenericTheory>(std::move(sig), std::move(schemes), std::move(model), limits);
}
/// No equations: q is the identity.
inline TheoryHandle free_theory(Signature sig) { return generic_theory(std::move(sig), {}); }

}  // namespace eqlaw
