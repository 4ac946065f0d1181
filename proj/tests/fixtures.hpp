#pragma once

// Rule tables and systems shared by the suites, built without the DSL.

#include "eqlaw/cfg.hpp"
#include "eqlaw/gsos.hpp"
#include "eqlaw/solver.hpp"
#include "eqlaw/theory.hpp"

namespace fixture {

using namespace eqlaw;

inline Term var(const std::string& n) { return Term::var(n); }
inline Term sc(Rational q) { return Term::scalar("c", std::move(q)); }
inline Term sc_token(const std::string& t) { return Term::indexed("c", scalar_token(t)); }
inline Term add(Term a, Term b) { return Term::app("+", {std::move(a), std::move(b)}); }
inline Term mul(Term a, Term b) { return Term::app("*", {std::move(a), std::move(b)}); }
inline Term dot(Term a, Term b) { return Term::app(".", {std::move(a), std::move(b)}); }
inline Term X() { return Term::app("X"); }

inline Signature stream_signature() {
  Signature sig;
  sig.add_op("X", 0).add_op("+", 2, 10).add_op("*", 2, 20).add_family("c");
  return sig;
}

inline OutputExpr tok(const char* n) { return OutputExpr::token(n); }

/// The stream rules; `convolution` selects the GSOS product rule
/// (s x t)' = s' x t + [s(0)] x t'.
inline DistLaw stream_law(bool convolution = false) {
  ArgPattern px{"x", "ox", "dx"}, py{"y", "oy", "dy"};
  GsosSpec spec{convolution ? RuleFormat::gsos : RuleFormat::simple_sos, {}};
  spec.rules.push_back({"c", true, "k", {}, tok("k"), NextExpr::of(sc(0))});
  spec.rules.push_back({"X", false, "", {}, OutputExpr::constant(0), NextExpr::of(sc(1))});
  spec.rules.push_back({"+", false, "", {px, py}, OutputExpr::apply("+", {tok("ox"), tok("oy")}),
                        NextExpr::of(add(var("dx"), var("dy")))});
  Term next = convolution ? add(mul(var("dx"), var("y")), mul(sc_token("ox"), var("dy")))
                          : add(mul(var("dx"), sc_token("oy")),
                                add(mul(var("dx"), mul(X(), var("dy"))), mul(sc_token("ox"), var("dy"))));
  spec.rules.push_back({"*", false, "", {px, py}, OutputExpr::apply("*", {tok("ox"), tok("oy")}), NextExpr::of(next)});
  return DistLaw(stream_signature(), {"*"}, OutputAlgebra::rationals(), std::move(spec));
}

inline TheoryHandle stream_theory() { return commutative_semiring(stream_signature()); }

inline BehaviourStep<Term> stream_step(Rational out, Term next) {
  return {Output::rational(std::move(out)), {{"*", std::move(next)}}};
}

/// ones = (1, 1, ...) and nat = (1, 2, 3, ...).
inline CorecSystem stream_system(DistLaw law = stream_law(), TheoryHandle th = stream_theory()) {
  CorecSystem sys{{"ones", "nat"}, {}, std::move(law), std::move(th)};
  sys.phi.emplace("ones", stream_step(1, var("ones")));
  sys.phi.emplace("nat", stream_step(1, add(var("nat"), var("ones"))));
  sys.validate();
  return sys;
}

inline Signature three_signature() {
  Signature sig;
  sig.add_op("n1", 0).add_op("n2", 0).add_op("n3", 0);
  return sig;
}

/// n1 -> n1, n2 -> n3, n3 -> n3, all with output 0.
inline DistLaw three_law() {
  GsosSpec spec{RuleFormat::simple_sos, {}};
  spec.rules.push_back({"n1", false, "", {}, OutputExpr::constant(0), NextExpr::of(Term::app("n1"))});
  spec.rules.push_back({"n2", false, "", {}, OutputExpr::constant(0), NextExpr::of(Term::app("n3"))});
  spec.rules.push_back({"n3", false, "", {}, OutputExpr::constant(0), NextExpr::of(Term::app("n3"))});
  return DistLaw(three_signature(), {"*"}, OutputAlgebra::rationals(), std::move(spec));
}

inline TheoryHandle three_theory() {
  FiniteModel m{2, {{"n1", {0}}, {"n2", {0}}, {"n3", {1}}}};
  return generic_theory(three_signature(), {make_scheme("n1_n2", Term::app("n1"), Term::app("n2"))}, m);
}

inline TheoryHandle language_theory() { return idempotent_semiring(cfg_signature(), {"+", ".", "", "0", "1"}); }

/// S -> a S B | eps, B -> b.
inline GnfGrammar anbn_grammar() {
  GnfGrammar g;
  g.nonterminals = {"S", "B"};
  g.alphabet = {"a", "b"};
  g.empty = {{"S", true}, {"B", false}};
  g.prods["S"]["a"] = {{"S", "B"}};
  g.prods["B"]["b"] = {{}};
  g.start = var("S");
  return g;
}

/// S -> a S R S | eps, R -> b: balanced brackets with a opening.
inline GnfGrammar brackets_grammar() {
  GnfGrammar g;
  g.nonterminals = {"S", "R"};
  g.alphabet = {"a", "b"};
  g.empty = {{"S", true}, {"R", false}};
  g.prods["S"]["a"] = {{"S", "R", "S"}};
  g.prods["R"]["b"] = {{}};
  g.start = var("S");
  return g;
}

inline std::vector<Index> scalar_samples() { return {scalar(0), scalar(1), scalar(2), scalar(Rational(1, 2))}; }

}  // namespace fixture
