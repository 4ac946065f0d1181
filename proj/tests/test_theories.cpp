#include "catch_amalgamated.hpp"

#include "eqlaw/cfg.hpp"
#include "eqlaw/theory.hpp"
#include "oracles.hpp"

#include <random>

using namespace eqlaw;

namespace {

Signature stream_sig() {
  Signature sig;
  sig.add_op("X", 0).add_op("+", 2, 10).add_op("*", 2, 20).add_family("c");
  return sig;
}

Term var(const char* n) { return Term::var(n); }
Term sc(Rational q) { return Term::scalar("c", q); }
Term add(Term a, Term b) { return Term::app("+", {std::move(a), std::move(b)}); }
Term mul(Term a, Term b) { return Term::app("*", {std::move(a), std::move(b)}); }
Term dot(Term a, Term b) { return Term::app(".", {std::move(a), std::move(b)}); }

TheoryHandle cs() { return commutative_semiring(stream_sig()); }
TheoryHandle is() { return idempotent_semiring(cfg_signature(), {"+", ".", "", "0", "1"}); }

std::vector<Index> scalar_samples() { return {scalar(0), scalar(1), scalar(2)}; }

// Evaluation points for the polynomial oracle.
std::vector<std::map<std::string, Rational>> points() {
  return {{{"x", 2}, {"y", 5}, {"X", 7}},
          {{"x", Rational(-3, 2)}, {"y", 11}, {"X", Rational(1, 3)}},
          {{"x", 13}, {"y", Rational(-2, 7)}, {"X", -4}}};
}

oracle::Language words_of(const NormalForm& nf) {
  oracle::Language out;
  for (const auto& w : nf.words()) {
    std::vector<std::string> names;
    for (const auto& t : w) names.push_back(t.name());
    out.insert(names);
  }
  return out;
}

}  // namespace

TEST_CASE("instantiate_scheme substitutes metavariables") {
  auto s = make_scheme("plus_unit", add(var("x"), sc(0)), var("x"));
  auto [l, r] = instantiate_scheme(s, {{"x", mul(var("v"), var("w"))}});
  CHECK(l == add(mul(var("v"), var("w")), sc(0)));
  CHECK(r == mul(var("v"), var("w")));

  auto comm = make_scheme("comm", add(var("x"), var("y")), add(var("y"), var("x")));
  auto [l2, r2] = instantiate_scheme(comm, {{"x", var("a")}, {"y", var("b")}});
  CHECK(l2 == add(var("a"), var("b")));
  CHECK(r2 == add(var("b"), var("a")));

  auto assoc = make_scheme("assoc", add(add(var("x"), var("y")), var("z")), add(var("x"), add(var("y"), var("z"))));
  auto [l3, r3] = instantiate_scheme(assoc, {{"x", var("x")}, {"y", var("y")}, {"z", var("z")}});
  CHECK(l3 == assoc.lhs);
  CHECK(r3 == assoc.rhs);
  CHECK(assoc.metavars == std::vector<std::string>{"x", "y", "z"});

  CHECK_THROWS_AS(instantiate_scheme(assoc, {{"x", var("a")}}), unbound_variable);
}

TEST_CASE("scalar parameters of a scheme") {
  auto th = cs();
  const auto& schemes = th->schemes();
  REQUIRE(schemes.size() == 10);
  const auto& sum = schemes[8];
  CHECK(sum.name == "scalar_sum");
  CHECK(sum.metavars.empty());
  CHECK(sum.params == std::vector<std::string>{"a", "b"});
  auto [l, r] = instantiate_scheme(sum, {}, {{"a", scalar(2)}, {"b", scalar(3)}});
  CHECK(l == sc(5));
  CHECK(r == add(sc(2), sc(3)));
}

TEST_CASE("idempotent semiring normal form of 1 + x.(y + x)") {
  auto th = is();
  Term t = add(Term::app("1"), dot(var("x"), add(var("y"), var("x"))));
  NormalForm nf = th->normalize(t);
  WordSet expected{{}, {var("x"), var("x")}, {var("x"), var("y")}};
  CHECK(nf.words() == expected);
  CHECK(words_of(nf) == oracle::language(t));
  CHECK(nf.to_string() == "{eps, x.x, x.y}");
}

TEST_CASE("commutative semiring normal form of [2]*(v + v)") {
  auto th = cs();
  Term t = mul(sc(2), add(var("x"), var("x")));
  NormalForm nf = th->normalize(t);
  CHECK(nf.polynomial() == SemiringPolynomial::monomial({var("x")}, scalar(4)));
  for (const auto& p : points()) CHECK(oracle::evaluate(t, p) == 4 * p.at("x"));
  CHECK(th->normalize(th->representative(nf)) == nf);
}

TEST_CASE("a variable normalizes to its own class") {
  CHECK(cs()->normalize(var("v")).polynomial() == SemiringPolynomial::generator(var("v")));
  CHECK(is()->normalize(var("v")).words() == WordSet{{var("v")}});
  CHECK(free_theory(stream_sig())->normalize(var("v")).term() == var("v"));
}

TEST_CASE("equiv on the worked instances") {
  auto i = is();
  Term xy = dot(var("x"), var("y"));
  CHECK(i->equiv(add(xy, xy), xy) == Equivalence::equal);
  CHECK(i->equiv(xy, dot(var("y"), var("x"))) == Equivalence::distinct);

  auto c = cs();
  CHECK(c->equiv(mul(sc(2), sc(3)), sc(6)) == Equivalence::equal);
  CHECK(c->equiv(add(sc(2), sc(3)), sc(5)) == Equivalence::equal);
  CHECK(c->equiv(mul(sc(2), sc(3)), sc(5)) == Equivalence::distinct);

  Signature three;
  three.add_op("n1", 0).add_op("n2", 0).add_op("n3", 0);
  auto free = free_theory(three);
  CHECK(free->equiv(Term::app("n1"), Term::app("n3")) == Equivalence::distinct);
  CHECK(free->decidable());
}

TEST_CASE("generic theory with a separating model") {
  Signature three;
  three.add_op("n1", 0).add_op("n2", 0).add_op("n3", 0);
  FiniteModel m{2, {{"n1", {0}}, {"n2", {0}}, {"n3", {1}}}};
  auto th = generic_theory(three, {make_scheme("n1_n2", Term::app("n1"), Term::app("n2"))}, m);
  CHECK(th->equiv(Term::app("n1"), Term::app("n2")) == Equivalence::equal);
  CHECK(th->equiv(Term::app("n1"), Term::app("n3")) == Equivalence::distinct);
  CHECK(th->normalize(Term::app("n2")).term() == Term::app("n1"));

  auto unmodelled = generic_theory(three, {make_scheme("n1_n2", Term::app("n1"), Term::app("n2"))});
  CHECK(unmodelled->equiv(Term::app("n1"), Term::app("n3")) == Equivalence::unknown);
  CHECK_FALSE(unmodelled->decidable());

  FiniteModel bad{2, {{"n1", {0}}, {"n2", {1}}, {"n3", {1}}}};
  CHECK_THROWS_AS(generic_theory(three, {make_scheme("n1_n2", Term::app("n1"), Term::app("n2"))}, bad),
                  invalid_model);
}

TEST_CASE("quotient_mu flattens a term of normal forms") {
  auto i = is();
  NormalForm l1(WordSet{{var("a")}});
  NormalForm l2(WordSet{{var("b")}, {var("c")}});
  NormalForm got = quotient_mu(*i, dot(var("L1"), var("L2")), {{"L1", l1}, {"L2", l2}});
  CHECK(got.words() == WordSet{{var("a"), var("b")}, {var("a"), var("c")}});
  CHECK(quotient_mu(*i, var("L"), {{"L", l2}}) == l2);

  auto c = cs();
  NormalForm two_v = c->normalize(mul(sc(2), var("v")));
  NormalForm sum = quotient_mu(*c, add(var("p"), var("q")), {{"p", two_v}, {"q", two_v}});
  CHECK(sum.polynomial() == SemiringPolynomial::monomial({var("v")}, scalar(4)));
  CHECK_THROWS_AS(quotient_mu(*c, var("r"), {}), unbound_variable);
}

TEST_CASE("normalization is a monad morphism") {
  const std::vector<std::string> vars{"x", "y"};
  for (const auto& th : {cs(), is()}) {
    const Signature& sig = th->signature();
    auto outer = enumerate_terms(sig, vars, 4, scalar_samples());
    auto inner = enumerate_terms(sig, {"u", "w"}, 3, scalar_samples());
    REQUIRE(!outer.empty());
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
    for (const auto& t : outer) {
      for (int k = 0; k < 3; ++k) {
        Substitution s{{"x", inner[pick(rng)]}, {"y", inner[pick(rng)]}};
        std::map<std::string, NormalForm> leaves;
        for (const auto& [v, u] : s) leaves.emplace(v, th->normalize(u));
        REQUIRE(quotient_mu(*th, t, leaves) == th->normalize(substitute(t, s)));
      }
      // unit: the leaves are the classes of the variables themselves
      std::map<std::string, NormalForm> units;
      for (const auto& v : vars) units.emplace(v, th->normalize(Term::var(v)));
      REQUIRE(quotient_mu(*th, t, units) == th->normalize(t));
    }
    // left unit: a single-variable outer term returns its leaf
    for (const auto& u : inner) REQUIRE(quotient_mu(*th, Term::var("x"), {{"x", th->normalize(u)}}) == th->normalize(u));
  }
}

TEST_CASE("quotient multiplication is associative") {
  for (const auto& th : {cs(), is()}) {
    const Signature& sig = th->signature();
    auto terms = enumerate_terms(sig, {"x", "y"}, 3, scalar_samples());
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
    for (int k = 0; k < 200; ++k) {
      const Term& t = terms[pick(rng)];
      Substitution s1{{"x", terms[pick(rng)]}, {"y", terms[pick(rng)]}};
      Substitution s2{{"x", terms[pick(rng)]}, {"y", terms[pick(rng)]}};
      std::map<std::string, NormalForm> nf2;
      for (const auto& [v, u] : s2) nf2.emplace(v, th->normalize(u));
      std::map<std::string, NormalForm> inner;
      for (const auto& [v, u] : s1) inner.emplace(v, quotient_mu(*th, u, nf2));
      NormalForm stepwise = quotient_mu(*th, t, inner);
      NormalForm flat = th->normalize(substitute(substitute(t, s1), s2));
      REQUIRE(stepwise == flat);
    }
  }
}

TEST_CASE("commutative semiring normal forms match polynomial functions") {
  auto th = cs();
  auto terms = enumerate_terms(th->signature(), {"x", "y"}, 4, scalar_samples());
  std::map<NormalForm, std::vector<Rational>> seen;
  for (const auto& t : terms) {
    std::vector<Rational> values;
    for (const auto& p : points()) values.push_back(oracle::evaluate(t, p));
    NormalForm nf = th->normalize(t);
    auto [it, fresh] = seen.emplace(nf, values);
    if (!fresh) REQUIRE(it->second == values);
    for (const auto& p : points()) REQUIRE(oracle::evaluate(th->representative(nf), p) == oracle::evaluate(t, p));
  }
  // distinct classes have distinct value vectors
  std::set<std::vector<Rational>> vectors;
  for (const auto& [nf, v] : seen) vectors.insert(v);
  CHECK(vectors.size() == seen.size());
}

TEST_CASE("idempotent semiring normal forms match finite languages") {
  auto th = is();
  auto terms = enumerate_terms(th->signature(), {"x", "y"}, 5);
  for (const auto& t : terms) {
    NormalForm nf = th->normalize(t);
    REQUIRE(words_of(nf) == oracle::language(t));
    REQUIRE(oracle::language(th->representative(nf)) == oracle::language(t));
    REQUIRE(oracle::language(th->alternative_representative(nf)) == oracle::language(t));
  }
}

TEST_CASE("representatives are sections of normalize") {
  for (const auto& th : {cs(), is()}) {
    for (const auto& t : enumerate_terms(th->signature(), {"x", "y"}, 4, scalar_samples())) {
      NormalForm nf = th->normalize(t);
      REQUIRE(th->normalize(th->representative(nf)) == nf);
      REQUIRE(th->normalize(th->alternative_representative(nf)) == nf);
      REQUIRE(th->equiv(t, th->representative(nf)) == Equivalence::equal);
    }
  }
}

TEST_CASE("equiv is an equivalence and a congruence") {
  for (const auto& th : {cs(), is()}) {
    const Signature& sig = th->signature();
    auto terms = enumerate_terms(sig, {"x", "y"}, 3, scalar_samples());
    for (const auto& a : terms) {
      REQUIRE(th->equiv(a, a) == Equivalence::equal);
      for (const auto& b : terms) {
        auto ab = th->equiv(a, b);
        REQUIRE(ab == th->equiv(b, a));
        if (ab != Equivalence::equal) continue;
        for (const auto& c : terms)
          if (th->equiv(b, c) == Equivalence::equal) REQUIRE(th->equiv(a, c) == Equivalence::equal);
        for (const auto& op : sig.ops())
          if (op.arity == 2)
            for (const auto& d : terms) {
              REQUIRE(th->equiv(Term::app(op.symbol, {a, d}), Term::app(op.symbol, {b, d})) == Equivalence::equal);
              REQUIRE(th->equiv(Term::app(op.symbol, {d, a}), Term::app(op.symbol, {d, b})) == Equivalence::equal);
            }
      }
    }
  }
}

TEST_CASE("builtin normal forms agree with the bounded search") {
  for (const auto& th : {cs(), is()}) {
    const Signature& sig = th->signature();
    GenericTheory search(sig, th->schemes(), std::nullopt, SearchLimits{3, 2000});
    auto terms = enumerate_terms(sig, {"x", "y"}, 4, scalar_samples());
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
    std::size_t equal = 0;
    for (int k = 0; k < 150; ++k) {
      const Term& a = terms[pick(rng)];
      const Term& b = terms[pick(rng)];
      auto e = search.equiv(a, b);
      REQUIRE(e != Equivalence::distinct);
      if (e == Equivalence::equal) {
        ++equal;
        REQUIRE(th->equiv(a, b) == Equivalence::equal);
      }
    }
    CHECK(equal > 0);
  }
}

TEST_CASE("bounded search finds the axiom instances") {
  auto c = cs();
  GenericTheory search(c->signature(), c->schemes());
  Term x = var("x"), y = var("y"), z = var("z");
  CHECK(search.equiv(add(x, y), add(y, x)) == Equivalence::equal);
  CHECK(search.equiv(mul(x, add(y, z)), add(mul(x, y), mul(x, z))) == Equivalence::equal);
  CHECK(search.equiv(mul(sc(1), add(x, sc(0))), x) == Equivalence::equal);
  CHECK(search.equiv(x, y) == Equivalence::unknown);

  auto i = is();
  GenericTheory isearch(i->signature(), i->schemes());
  CHECK(isearch.equiv(add(x, x), x) == Equivalence::equal);
  CHECK(isearch.equiv(dot(add(x, y), z), add(dot(x, z), dot(y, z))) == Equivalence::equal);
}

TEST_CASE("terms outside the theory signature are rejected") {
  CHECK_THROWS_AS(cs()->normalize(Term::app("f", {var("x")})), not_in_theory_signature);
  CHECK_THROWS_AS(is()->normalize(Term::app("*", {var("x"), var("y")})), not_in_theory_signature);
  Signature no_scalars;
  no_scalars.add_op("+", 2).add_op("*", 2);
  CHECK_THROWS_AS(commutative_semiring(no_scalars), signature_mismatch);
}
