#include "catch_amalgamated.hpp"

#include "eqlaw/dsl.hpp"
#include "eqlaw/preservation.hpp"

using namespace eqlaw;

namespace {

std::string path(const std::string& name) { return std::string(EQLAW_DSL_DIR) + "/" + name; }

const char* const bundled[] = {"stream.dsl", "stream_gsos.dsl", "three_zeros.dsl", "cfg.dsl", "parens.dsl"};

const char* const header = R"(signature {
  op X/0;
  op +/2 infix 10;
  op */2 infix 20;
  family c : rational;
}
outputs rational;
theory commutative-semiring;
)";

const char* const rules = R"(rules simple-sos {
  rule c[k] => out = k; next = [0];
  rule X => out = 0; next = [1];
  rule +(x: o=ox, d=dx; y: o=oy, d=dy) => out = ox + oy; next = dx + dy;
  rule *(x: o=ox, d=dx; y: o=oy, d=dy) => out = ox*oy; next = dx*[oy] + (dx*(X*dy) + [ox]*dy);
}
)";

template <class E>
E parse_failure(const std::string& src) {
  try {
    parse_workbench(src);
  } catch (const E& e) {
    return e;
  }
  FAIL("expected a parse failure");
  throw;
}

}  // namespace

TEST_CASE("the stream workbench loads") {
  auto wb = load(path("stream.dsl"));
  REQUIRE(wb.theory);
  CHECK(wb.theory->kind() == TheoryKind::commutative_semiring);
  CHECK(wb.theory->schemes().size() == 10);
  CHECK(wb.require_law().spec().rules.size() == 4);
  CHECK(wb.require_law().spec().format == RuleFormat::simple_sos);
  CHECK(wb.alphabet == Alphabet{"*"});
  const auto& sys = wb.require_system();
  CHECK(sys.variables == std::vector<std::string>{"ones", "nat"});
  CHECK_FALSE(wb.grammar);
  CHECK_THROWS_AS(wb.require_grammar(), missing_section);
}

TEST_CASE("the other bundled workbenches load") {
  auto cfg = load(path("cfg.dsl"));
  REQUIRE(cfg.grammar);
  CHECK(cfg.grammar->nonterminals == std::vector<std::string>{"S", "B"});
  CHECK(cfg.grammar->start == Term::var("S"));
  CHECK(cfg.alphabet == Alphabet{"a", "b"});
  CHECK(cfg.require_law().spec().format == RuleFormat::gsos);
  CHECK(cfg.require_system().phi.at("S").next.at("a") == parse_term("S.B", *cfg.signature));

  auto three = load(path("three_zeros.dsl"));
  CHECK(three.theory_decl.kind == "generic");
  REQUIRE(three.theory_decl.model);
  CHECK(three.theory_decl.model->size == 2);
  CHECK_FALSE(three.system);
  CHECK_THROWS_AS(three.require_system(), missing_section);
}

TEST_CASE("bundled workbenches give the expected verdicts") {
  std::map<std::string, Verdict> expected{{"stream.dsl", Verdict::holds},
                                          {"stream_gsos.dsl", Verdict::fails},
                                          {"three_zeros.dsl", Verdict::fails},
                                          {"cfg.dsl", Verdict::holds},
                                          {"parens.dsl", Verdict::holds}};
  for (const auto& [file, verdict] : expected) {
    INFO(file);
    auto wb = load(path(file));
    CHECK(check_preservation(*wb.theory, wb.require_law()).verdict == verdict);
  }
}

TEST_CASE("printing and reloading gives an equal workbench") {
  for (const char* file : bundled) {
    INFO(file);
    auto wb = load(path(file));
    auto text = print_workbench(wb);
    auto again = parse_workbench(text);
    CHECK(again == wb);
    CHECK(print_workbench(again) == text);
  }
}

TEST_CASE("unknown symbols are reported with their position") {
  auto e = parse_failure<unknown_symbol>(std::string(header) + rules + "system {\n  s: out = 1; next = s + Y(s);\n}\n");
  CHECK(e.line == 16);
  CHECK(e.column == 26);
  CHECK(std::string(e.what()).find("'Y'") != std::string::npos);
  CHECK_THROWS_AS(parse_workbench(std::string(header) + rules + "system {\n  s: out = 1; next = s + Y;\n}\n"),
                  parse_error);
}

TEST_CASE("arity mismatches are reported with their position") {
  auto e = parse_failure<arity_mismatch>(std::string(header) + "rules simple-sos {\n  rule X(x: o=ox, d=dx) => out = 0; next = [1];\n}\n");
  CHECK(e.line == 10);
  CHECK(e.column > 1);
  auto t = parse_failure<arity_mismatch>(std::string(header) + rules + "system {\n  s: out = 1; next = X(s);\n}\n");
  CHECK(t.line == 16);
}

TEST_CASE("syntax errors are parse errors") {
  CHECK_THROWS_AS(parse_workbench("signature { op X 0; }"), parse_error);
  CHECK_THROWS_AS(parse_workbench("signature { op X/0; } outputs complex;"), parse_error);
  CHECK_THROWS_AS(parse_workbench("bogus;"), parse_error);
  auto e = parse_failure<parse_error>("signature {\n  op X/0;\n  op +/two;\n}");
  CHECK(e.line == 3);
  CHECK_THROWS_AS(load(path("missing.dsl")), error);
}

TEST_CASE("terms parse with infix precedence") {
  auto wb = load(path("stream.dsl"));
  const auto& sig = *wb.signature;
  auto t = parse_term("X + [2]*ones*nat", sig);
  CHECK(t.name() == "+");
  CHECK(to_string(t, sig) == "X + [2]*ones*nat");
  CHECK(parse_term(to_string(t, sig), sig) == t);
  CHECK(parse_term("[1/2]", sig) == Term::scalar("c", Rational(1, 2)));
  CHECK_THROWS_AS(parse_term("X +", sig), parse_error);
  CHECK(parse_term("Q", sig) == Term::var("Q"));
  CHECK_THROWS_AS(parse_term("Q(X)", sig), unknown_symbol);
}

TEST_CASE("words split per character or at separators") {
  CHECK(parse_word("aabb", {"a", "b"}) == Word{"a", "a", "b", "b"});
  CHECK(parse_word("", {"a", "b"}).empty());
  CHECK(parse_word("lp, rp lp", {"lp", "rp"}) == Word{"lp", "rp", "lp"});
  CHECK_THROWS_AS(parse_word("abc", {"a", "b"}), alphabet_mismatch);
}

TEST_CASE("missing sections are reported") {
  Workbench empty;
  CHECK_THROWS_AS(empty.require_signature(), missing_section);
  CHECK_THROWS_AS(empty.require_law(), missing_section);
  auto wb = parse_workbench(header);
  CHECK_THROWS_AS(wb.require_law(), missing_section);
  CHECK_THROWS_AS(wb.require_system(), missing_section);
}
