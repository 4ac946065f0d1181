#include "catch_amalgamated.hpp"

#include "eqlaw/term.hpp"
#include "oracles.hpp"

#include <set>

using namespace eqlaw;

namespace {

Signature plus_zero() {
  Signature sig;
  sig.add_op("0", 0).add_op("+", 2, 10);
  return sig;
}

Signature ring() {
  Signature sig;
  sig.add_op("0", 0).add_op("neg", 1).add_op("+", 2, 10).add_op("*", 2, 20);
  return sig;
}

Term plus(Term a, Term b) { return Term::app("+", {std::move(a), std::move(b)}); }
Term times(Term a, Term b) { return Term::app("*", {std::move(a), std::move(b)}); }

}  // namespace

TEST_CASE("substitute replaces every occurrence") {
  Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
  Term t = substitute(times(x, x), {{"x", plus(y, z)}});
  CHECK(t == times(plus(y, z), plus(y, z)));
  CHECK(to_string(t, ring()) == "(y + z)*(y + z)");
}

TEST_CASE("substitute needs every variable while rename does not") {
  Term t = plus(Term::var("x"), Term::var("y"));
  CHECK_THROWS_AS(substitute(t, {{"x", Term::app("0")}}), unbound_variable);
  CHECK(rename(t, {{"x", Term::app("0")}}) == plus(Term::app("0"), Term::var("y")));
  CHECK(rename(t, {}) == t);
}

TEST_CASE("monad laws for variables and substitution") {
  const Signature sig = ring();
  const std::vector<std::string> vars{"x", "y"};
  auto terms = enumerate_terms(sig, vars, 6);
  REQUIRE(terms.size() > 1000);

  const Substitution s1{{"x", plus(Term::var("y"), Term::var("x"))}, {"y", Term::app("neg", {Term::var("x")})}};
  const Substitution s2{{"x", times(Term::var("y"), Term::var("y"))}, {"y", Term::app("0")}};
  Substitution composed;
  for (const auto& [v, t] : s1) composed.emplace(v, substitute(t, s2));

  for (const auto& t : terms) {
    Substitution unit;
    for (const auto& v : vars) unit.emplace(v, Term::var(v));
    REQUIRE(substitute(t, unit) == t);
    REQUIRE(substitute(substitute(t, s1), s2) == substitute(t, composed));
  }
  for (const auto& v : vars)
    for (const auto& t : terms) REQUIRE(substitute(Term::var(v), {{v, t}}) == t);
}

TEST_CASE("enumerate_terms on the smallest sizes") {
  const Signature sig = plus_zero();
  auto one = enumerate_terms(sig, {"x"}, 1);
  REQUIRE(one.size() == 2);
  CHECK(one[0] == Term::var("x"));
  CHECK(one[1] == Term::app("0"));

  auto three = enumerate_terms(sig, {"x"}, 3);
  CHECK(three.size() == 6);
  std::set<Term> got(three.begin(), three.end());
  Term x = Term::var("x"), z = Term::app("0");
  for (const auto& t : {plus(x, x), plus(x, z), plus(z, x), plus(z, z)}) CHECK(got.count(t));
}

TEST_CASE("enumerate_terms count agrees with the counting recurrence") {
  const Signature sig = plus_zero();
  std::size_t expected = 0;
  for (std::size_t n = 1; n <= 3; ++n) expected += oracle::count_terms(sig, 1, n);
  CHECK(expected == 6);
  CHECK(enumerate_terms(sig, {"x"}, 3).size() == expected);

  const Signature r = ring();
  for (std::size_t max = 1; max <= 6; ++max) {
    std::size_t total = 0;
    for (std::size_t n = 1; n <= max; ++n) total += oracle::count_terms(r, 2, n);
    CHECK(enumerate_terms(r, {"x", "y"}, max).size() == total);
  }
}

TEST_CASE("enumerate_terms is duplicate-free and complete up to size 4") {
  for (const Signature& sig : {plus_zero(), ring()}) {
    auto terms = enumerate_terms(sig, {"x", "y"}, 4);
    std::set<Term> seen(terms.begin(), terms.end());
    CHECK(seen.size() == terms.size());
    std::set<Term> brute;
    for (std::size_t n = 1; n <= 4; ++n)
      for (const auto& t : oracle::terms_of_size(sig, {"x", "y"}, n)) brute.insert(t);
    CHECK(seen == brute);
  }
}

TEST_CASE("enumerate_terms orders by size then declaration order") {
  auto terms = enumerate_terms(ring(), {"x", "y"}, 4);
  for (std::size_t i = 1; i < terms.size(); ++i) REQUIRE(terms[i - 1].size() <= terms[i].size());
  CHECK(terms[0] == Term::var("x"));
  CHECK(terms[1] == Term::var("y"));
  CHECK(terms[2] == Term::app("0"));
  CHECK(terms[3].name() == "neg");
}

TEST_CASE("indexed constants are enumerated from the samples") {
  Signature sig;
  sig.add_family("c").add_op("+", 2, 10);
  auto terms = enumerate_terms(sig, {"x"}, 1, {scalar(0), scalar(Rational(1, 2))});
  REQUIRE(terms.size() == 3);
  CHECK(terms[2] == Term::scalar("c", Rational(1, 2)));
  CHECK(to_string(terms[2], sig) == "[1/2]");
}

TEST_CASE("validate reports arity and undeclared symbols") {
  const Signature sig = ring();
  CHECK_NOTHROW(validate(sig, plus(Term::var("x"), Term::app("0"))));
  CHECK_THROWS_AS(validate(sig, Term::app("+", {Term::var("x")})), signature_mismatch);
  CHECK_THROWS_AS(validate(sig, Term::app("f", {Term::var("x")})), signature_mismatch);
  CHECK_FALSE(conforms(sig, Term::app("0", {Term::var("x")})));
}

TEST_CASE("signatures reject duplicates and non-binary infix symbols") {
  Signature sig;
  sig.add_op("f", 1);
  CHECK_THROWS_AS(sig.add_op("f", 2), signature_mismatch);
  CHECK_THROWS_AS(sig.add_op("g", 1, 5), signature_mismatch);
  CHECK_THROWS_AS(sig.add_family("f"), signature_mismatch);
}

TEST_CASE("variables are collected in first-occurrence order") {
  Term t = plus(times(Term::var("y"), Term::var("x")), Term::var("y"));
  CHECK(variables(t) == std::vector<std::string>{"y", "x"});
}

TEST_CASE("shared subterms are visited once") {
  Term t = Term::var("x");
  for (int i = 0; i < 60; ++i) t = plus(t, t);
  CHECK(variables(t) == std::vector<std::string>{"x"});
  std::size_t visits = 0;
  visit_distinct(t, [&](const Term&) { ++visits; });
  CHECK(visits == 61);
}

TEST_CASE("term ordering is a strict total order on distinct terms") {
  auto terms = enumerate_terms(ring(), {"x", "y"}, 3);
  for (const auto& a : terms)
    for (const auto& b : terms) {
      if (a == b) {
        CHECK_FALSE(a < b);
        continue;
      }
      CHECK((a < b) != (b < a));
      CHECK(shortlex_less(a, b) != shortlex_less(b, a));
    }
}

TEST_CASE("printing respects precedence") {
  const Signature sig = ring();
  Term x = Term::var("x"), y = Term::var("y");
  CHECK(to_string(plus(times(x, y), x), sig) == "x*y + x");
  CHECK(to_string(times(plus(x, y), x), sig) == "(x + y)*x");
  CHECK(to_string(Term::app("neg", {x}), sig) == "neg(x)");
}

TEST_CASE("substitute_indices instantiates symbolic constants") {
  Term t = plus(Term::indexed("c", scalar_token("k")), Term::var("x"));
  Term u = substitute_indices(t, {{"k", scalar(3)}});
  CHECK(u == plus(Term::scalar("c", 3), Term::var("x")));
  CHECK(index_tokens(t) == std::set<std::string>{"k"});
  CHECK(index_tokens(u).empty());
}
