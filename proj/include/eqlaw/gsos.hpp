#pragma once

// Rule specifications and their inductive extension to distributive laws
// T(Id x F) => (Id x F)T, plus the induced law on normal forms.

#include "eqlaw/behaviour.hpp"
#include "eqlaw/errors.hpp"
#include "eqlaw/term.hpp"
#include "eqlaw/theory.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace eqlaw {

enum class RuleFormat { simple_sos, gsos };

inline std::string to_string(RuleFormat f) { return f == RuleFormat::gsos ? "gsos" : "simple-sos"; }

/// Placeholder names for one argument: the argument itself, its output
/// token and its derivative.
struct ArgPattern {
  std::string arg;
  std::string out;
  std::string deriv;

  friend bool operator==(const ArgPattern&, const ArgPattern&) = default;
};

/// Successor template: a term over placeholders, or a case split on a
/// Boolean output token with branches for 0 and 1.
struct NextExpr {
  Term term = Term::var("");
  std::string token;
  std::vector<NextExpr> branches;

  static NextExpr of(Term t) { return {std::move(t), {}, {}}; }
  static NextExpr split(std::string token, NextExpr if0, NextExpr if1) {
    return {Term::var(""), std::move(token), {std::move(if0), std::move(if1)}};
  }

  bool is_case() const { return !token.empty(); }

  friend bool operator==(const NextExpr&, const NextExpr&) = default;
};

struct Rule {
  std::string symbol;
  bool family = false;
  std::string index_param;  // family rules only
  std::vector<ArgPattern> args;
  OutputExpr out;
  NextExpr next;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct GsosSpec {
  RuleFormat format = RuleFormat::simple_sos;
  std::vector<Rule> rules;

  const Rule* find(const std::string& symbol, bool family) const {
    for (const auto& r : rules)
      if (r.symbol == symbol && r.family == family) return &r;
    return nullptr;
  }
  Rule* find(const std::string& symbol, bool family) {
    return const_cast<Rule*>(std::as_const(*this).find(symbol, family));
  }

  friend bool operator==(const GsosSpec&, const GsosSpec&) = default;
};

class DistLaw {
 public:
  DistLaw(Signature sig, Alphabet alphabet, OutputAlgebra outputs, GsosSpec spec)
      : signature_(std::move(sig)), alphabet_(std::move(alphabet)), outputs_(std::move(outputs)), spec_(std::move(spec)) {
    validate();
  }

  const Signature& signature() const { return signature_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const OutputAlgebra& outputs() const { return outputs_; }
  const GsosSpec& spec() const { return spec_; }

 private:
  void validate() const {
    if (alphabet_.empty()) throw alphabet_mismatch("alphabet is empty");
    std::set<Letter> seen(alphabet_.begin(), alphabet_.end());
    if (seen.size() != alphabet_.size()) throw alphabet_mismatch("alphabet has repeated letters");
    for (const auto& r : spec_.rules) validate(r);
  }

  void validate(const Rule& r) const {
    auto fail = [&](const std::string& what) { throw placeholder_violation("rule '" + r.symbol + "': " + what); };
    if (r.family) {
      const auto* fam = signature_.find_family(r.symbol);
      if (!fam) throw signature_mismatch("rule for undeclared family '" + r.symbol + "'");
      if (fam->domain != IndexDomain::rational) fail("only rational families carry rules");
      if (!r.args.empty()) fail("a family constant takes no arguments");
    } else {
      const auto* op = signature_.find_op(r.symbol);
      if (!op) throw signature_mismatch("rule for undeclared symbol '" + r.symbol + "'");
      if (op->arity != r.args.size()) throw signature_mismatch("rule for '" + r.symbol + "' has the wrong arity");
    }
    std::set<std::string> names, outs, terms;
    auto fresh = [&](const std::string& n) {
      if (n.empty()) return;
      if (!names.insert(n).second) fail("placeholder '" + n + "' declared twice");
    };
    if (r.family) {
      fresh(r.index_param);
      outs.insert(r.index_param);
    }
    for (const auto& a : r.args) {
      fresh(a.arg);
      fresh(a.out);
      fresh(a.deriv);
      outs.insert(a.out);
      terms.insert(a.deriv);
      if (spec_.format == RuleFormat::gsos) terms.insert(a.arg);
    }
    std::vector<std::string> used;
    r.out.collect_tokens(used);
    for (const auto& t : used)
      if (!outs.count(t)) fail("output uses unknown token '" + t + "'");
    std::function<void(const NextExpr&)> check = [&](const NextExpr& n) {
      if (n.is_case()) {
        if (!outs.count(n.token)) fail("case on unknown token '" + n.token + "'");
        if (outputs_.kind() != OutputKind::boolean) fail("case splits need Boolean outputs");
        if (n.branches.size() != 2) fail("a case needs branches 0 and 1");
        for (const auto& b : n.branches) check(b);
        return;
      }
      validate_term(n.term);
      for (const auto& v : variables(n.term)) {
        if (terms.count(v)) continue;
        bool is_arg = std::any_of(r.args.begin(), r.args.end(), [&](const ArgPattern& a) { return a.arg == v; });
        if (is_arg) fail("simple-sos rules may not use the argument '" + v + "'");
        fail("next uses unknown placeholder '" + v + "'");
      }
      for (const auto& t : index_tokens(n.term))
        if (!outs.count(t)) fail("index uses unknown token '" + t + "'");
    };
    check(r.next);
  }

  void validate_term(const Term& t) const {
    if (t.is_var()) return;
    if (t.is_indexed()) {
      if (!signature_.find_family(t.name())) throw signature_mismatch("undeclared family '" + t.name() + "'");
      return;
    }
    const auto* op = signature_.find_op(t.name());
    if (!op || op->arity != t.args().size()) throw signature_mismatch("'" + t.name() + "' misused in a rule");
    for (const auto& a : t.args()) validate_term(a);
  }

  Signature signature_;
  Alphabet alphabet_;
  OutputAlgebra outputs_;
  GsosSpec spec_;
};

/// Steps of the leaves of a term: leaf-id to its observation.
using Leaves = std::map<std::string, BehaviourStep<Term>>;

struct Extension {
  Term first;                // epsilon_T applied: the term over leaf-ids
  BehaviourStep<Term> step;  // flattened successors

  friend bool operator==(const Extension&, const Extension&) = default;
};

namespace detail {

inline const Term& select_branch(const NextExpr& n, const std::map<std::string, Output>& env) {
  if (!n.is_case()) return n.term;
  auto b = env.at(n.token).as_bool();
  if (!b) throw symbolic_branch("case on '" + n.token + "' needs a concrete Boolean, got " + env.at(n.token).to_string());
  return select_branch(n.branches[*b ? 1 : 0], env);
}

}  // namespace detail

namespace detail {

using ExtensionCache = std::unordered_map<const void*, Extension>;

inline Extension extend(const DistLaw& law, const Term& t, const Leaves& leaves, ExtensionCache& cache);

}  // namespace detail

/// The inductive extension of the rule table. Successor components of the
/// leaves may be arbitrary terms; they are substituted directly, which is
/// the flattening by mu.
inline Extension extend_lambda(const DistLaw& law, const Term& t, const Leaves& leaves) {
  detail::ExtensionCache cache;
  return detail::extend(law, t, leaves, cache);
}

namespace detail {

inline Extension extend_node(const DistLaw& law, const Term& t, const Leaves& leaves, ExtensionCache& cache) {
  if (t.is_var()) {
    auto it = leaves.find(t.name());
    if (it == leaves.end()) throw unbound_variable(t.name());
    check_total(it->second, law.alphabet());
    if (it->second.output.kind() != law.outputs().kind()) throw alphabet_mismatch("leaf output has the wrong carrier");
    return {t, it->second};
  }
  const Rule* rule = law.spec().find(t.name(), t.is_indexed());
  if (!rule) throw missing_rule(t.name());

  std::map<std::string, Output> env;
  Substitution common;
  std::vector<Extension> subs;
  std::vector<Term> firsts;
  if (t.is_indexed()) {
    const auto* idx = t.scalar_index();
    if (!idx) throw signature_mismatch("family '" + t.name() + "' is not rational");
    env.emplace(rule->index_param, Output::rational(*idx));
  } else {
    if (t.args().size() != rule->args.size()) throw signature_mismatch("arity mismatch for '" + t.name() + "'");
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      subs.push_back(extend(law, t.args()[i], leaves, cache));
      firsts.push_back(subs.back().first);
      env.emplace(rule->args[i].out, subs.back().step.output);
      common.emplace(rule->args[i].arg, subs.back().first);
    }
  }

  BehaviourStep<Term> step;
  step.output = law.outputs().normalize(rule->out, env);

  std::map<std::string, ScalarPoly> index_env;
  for (const auto& [name, o] : env)
    if (!o.is_boolean()) index_env.emplace(name, o.poly());

  const Term& tmpl = detail::select_branch(rule->next, env);
  Term indexed = index_env.empty() ? tmpl : substitute_indices(tmpl, index_env);
  for (const auto& a : law.alphabet()) {
    Substitution s = common;
    for (std::size_t i = 0; i < subs.size(); ++i) s.emplace(rule->args[i].deriv, subs[i].step.next.at(a));
    step.next.emplace(a, substitute(indexed, s));
  }
  Term first = t.is_indexed() ? t : Term::app(t.name(), std::move(firsts));
  return {std::move(first), std::move(step)};
}

inline Extension extend(const DistLaw& law, const Term& t, const Leaves& leaves, ExtensionCache& cache) {
  if (auto it = cache.find(t.id()); it != cache.end()) return it->second;
  Extension e = extend_node(law, t, leaves, cache);
  cache.emplace(t.id(), e);
  return e;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The law on normal forms

enum class Certification {
  certified,    // preservation was checked: trust the representative
  uncertified,  // spot-check a second representative
  strict,       // refuse to run
};

using NormalStep = BehaviourStep<NormalForm>;

inline NormalStep normalize_step(const Theory& th, const BehaviourStep<Term>& s) {
  NormalStep out{s.output, {}};
  for (const auto& [a, t] : s.next) out.next.emplace(a, th.normalize(t));
  return out;
}

inline BehaviourStep<Term> represent_step(const Theory& th, const NormalStep& s) {
  BehaviourStep<Term> out{s.output, {}};
  for (const auto& [a, nf] : s.next) out.next.emplace(a, th.representative(nf));
  return out;
}

/// lambda' applied to a normal form whose leaves carry normalized steps.
inline NormalStep quotient_lambda(const Theory& th, const DistLaw& law, const NormalForm& nf,
                                  const std::map<std::string, NormalStep>& leaves,
                                  Certification mode = Certification::certified) {
  if (mode == Certification::strict)
    throw preservation_not_certified("the law is not certified to preserve the theory's equations");
  Leaves term_leaves;
  for (const auto& [x, s] : leaves) term_leaves.emplace(x, represent_step(th, s));
  NormalStep result = normalize_step(th, extend_lambda(law, th.representative(nf), term_leaves).step);
  if (mode == Certification::uncertified) {
    Term alt = th.alternative_representative(nf);
    NormalStep other = normalize_step(th, extend_lambda(law, alt, term_leaves).step);
    if (!(other == result))
      throw preservation_not_certified("representatives of " + nf.to_string(&law.signature()) +
                                       " have different steps");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Morphism square: F q . lambda = lambda' . q

struct SquareSample {
  Term term;
  Leaves leaves;
};

struct SquareFailure {
  std::string term;
  std::string representative;  // the class member whose step disagrees
  std::string via_lambda;      // F q . lambda
  std::string via_quotient;    // lambda' . q
};

struct SquareReport {
  std::size_t checked = 0;
  std::vector<SquareFailure> failures;
  bool passed() const { return failures.empty(); }
};

inline std::string step_string(const NormalStep& s, const Signature* sig) {
  std::string out = "<" + s.output.to_string() + ", ";
  bool first = true;
  for (const auto& [a, nf] : s.next) {
    out += (first ? "" : ", ") + a + " -> " + nf.to_string(sig);
    first = false;
  }
  return out + ">";
}

inline std::string step_string(const BehaviourStep<Term>& s, const Signature* sig) {
  std::string out = "<" + s.output.to_string() + ", ";
  bool first = true;
  for (const auto& [a, t] : s.next) {
    out += (first ? "" : ", ") + a + " -> " + to_string(t, sig);
    first = false;
  }
  return out + ">";
}

/// Compares both legs of the square. Besides the chosen representative,
/// every other known member of the class is run through lambda, so a law
/// that is not well defined on a class fails at every sample of it.
inline SquareReport morphism_square_check(const Theory& th, const DistLaw& law, const std::vector<SquareSample>& samples) {
  SquareReport report;
  const Signature* sig = &law.signature();
  for (const auto& s : samples) {
    ++report.checked;
    NormalStep direct = normalize_step(th, extend_lambda(law, s.term, s.leaves).step);
    std::map<std::string, NormalStep> nleaves;
    for (const auto& [x, st] : s.leaves) nleaves.emplace(x, normalize_step(th, st));
    NormalForm nf = th.normalize(s.term);
    std::vector<Term> members{th.representative(nf), th.alternative_representative(nf)};
    if (const auto* g = dynamic_cast<const GenericTheory*>(&th); g && !g->is_free()) {
      auto cls = g->explore(s.term).terms;
      std::vector<Term> sorted(cls.begin(), cls.end());
      std::sort(sorted.begin(), sorted.end(), shortlex_less);
      members.insert(members.end(), sorted.begin(), sorted.end());
    }
    Leaves rep_leaves;
    for (const auto& [x, st] : nleaves) rep_leaves.emplace(x, represent_step(th, st));
    std::set<Term> tried;
    for (const auto& m : members) {
      if (!tried.insert(m).second) continue;
      NormalStep via = normalize_step(th, extend_lambda(law, m, rep_leaves).step);
      if (via == direct) continue;
      report.failures.push_back({to_string(s.term, sig), to_string(m, sig), step_string(direct, sig), step_string(via, sig)});
      break;
    }
  }
  return report;
}

/// Samples for the square: enumerated terms over `vars`, each leaf x
/// stepping to fresh derivative tokens. Rational outputs are symbolic;
/// Boolean outputs range over all assignments.
inline std::vector<SquareSample> square_samples(const DistLaw& law, const std::vector<std::string>& vars,
                                                std::size_t max_size, const std::vector<Index>& index_samples = {}) {
  std::vector<SquareSample> out;
  const auto& alphabet = law.alphabet();
  auto leaf_step = [&](const std::string& x, Output o) {
    BehaviourStep<Term> s{std::move(o), {}};
    for (const auto& a : alphabet) s.next.emplace(a, Term::var(alphabet.size() == 1 ? "d_" + x : "d_" + x + "_" + a));
    return s;
  };
  for (const auto& t : enumerate_terms(law.signature(), vars, max_size, index_samples)) {
    auto used = variables(t);
    if (law.outputs().kind() == OutputKind::rational) {
      Leaves leaves;
      for (const auto& x : used) leaves.emplace(x, leaf_step(x, law.outputs().token("b_" + x)));
      out.push_back({t, std::move(leaves)});
      continue;
    }
    for (std::size_t bits = 0; bits < (std::size_t{1} << used.size()); ++bits) {
      Leaves leaves;
      for (std::size_t i = 0; i < used.size(); ++i)
        leaves.emplace(used[i], leaf_step(used[i], Output::boolean(((bits >> (used.size() - 1 - i)) & 1) != 0)));
      out.push_back({t, std::move(leaves)});
    }
  }
  return out;
}

}  // namespace eqlaw
