#pragma once

// The workbench file format: one file with optional signature, outputs,
// alphabet, theory, rules, system and grammar blocks.

#include "eqlaw/behaviour.hpp"
#include "eqlaw/cfg.hpp"
#include "eqlaw/errors.hpp"
#include "eqlaw/gsos.hpp"
#include "eqlaw/solver.hpp"
#include "eqlaw/term.hpp"
#include "eqlaw/theory.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace eqlaw {

struct parse_error : error {
  parse_error(const std::string& message, std::size_t line, std::size_t column)
      : error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

struct unknown_symbol : parse_error {
  using parse_error::parse_error;
};

struct arity_mismatch : parse_error {
  using parse_error::parse_error;
};

/// How the theory was declared, kept for printing.
struct TheoryDecl {
  std::string kind = "free";  // free | commutative-semiring | idempotent-semiring | generic
  SemiringRoles roles;
  std::vector<EquationScheme> equations;
  std::optional<FiniteModel> model;
  SearchLimits limits;

  friend bool operator==(const TheoryDecl&, const TheoryDecl&) = default;
};

struct Workbench {
  std::optional<Signature> signature;
  std::optional<OutputKind> outputs;
  Alphabet alphabet{"*"};
  TheoryDecl theory_decl;
  TheoryHandle theory;
  std::optional<DistLaw> law;
  std::optional<CorecSystem> system;
  std::optional<GnfGrammar> grammar;

  const Signature& require_signature() const {
    if (!signature) throw missing_section("no signature block");
    return *signature;
  }
  const DistLaw& require_law() const {
    if (!law) throw missing_section("no rules block");
    return *law;
  }
  const CorecSystem& require_system() const {
    if (!system) throw missing_section("no system or grammar block");
    return *system;
  }
  const GnfGrammar& require_grammar() const {
    if (!grammar) throw missing_section("no grammar block");
    return *grammar;
  }

  friend bool operator==(const Workbench& a, const Workbench& b) {
    auto same_law = [](const std::optional<DistLaw>& x, const std::optional<DistLaw>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->spec() == y->spec() && x->alphabet() == y->alphabet() && x->outputs().kind() == y->outputs().kind());
    };
    auto same_system = [](const std::optional<CorecSystem>& x, const std::optional<CorecSystem>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->variables == y->variables && x->phi == y->phi);
    };
    auto same_grammar = [](const std::optional<GnfGrammar>& x, const std::optional<GnfGrammar>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->nonterminals == y->nonterminals && x->alphabet == y->alphabet && x->empty == y->empty &&
                    x->prods == y->prods && x->start == y->start);
    };
    return a.signature == b.signature && a.outputs == b.outputs && a.alphabet == b.alphabet &&
           a.theory_decl == b.theory_decl && same_law(a.law, b.law) && same_system(a.system, b.system) &&
           same_grammar(a.grammar, b.grammar);
  }
};

namespace dsl {

struct Token {
  enum class Kind { ident, number, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
};

inline bool is_op_char(char c) { return std::string_view("+-*.<>|&^~!@$%?").find(c) != std::string_view::npos; }

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Token::Kind::symbol, "", line, col, i};
    std::size_t n = 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::ident;
      while (i + n < src.size() && (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_')) ++n;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::number;
      while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
      if (i + n + 1 < src.size() && src[i + n] == '.' && std::isdigit(static_cast<unsigned char>(src[i + n + 1]))) {
        ++n;
        while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
      }
    } else if ((c == '-' || c == '=') && i + 1 < src.size() && src[i + 1] == '>') {
      n = 2;
    } else if (!is_op_char(c) && std::string_view("{}()[];:,=/").find(c) == std::string_view::npos) {
      throw parse_error(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = src.substr(i, n);
    out.push_back(std::move(t));
    advance(n);
  }
  out.push_back({Token::Kind::end, "", line, col, i});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Workbench parse() {
    Workbench wb;
    std::optional<std::size_t> rules_at, system_at, grammar_at, theory_at;
    while (!at_end()) {
      const Token& t = peek();
      std::string kw = keyword();
      if (kw == "signature") {
        wb.signature = parse_signature();
      } else if (kw == "outputs") {
        std::string k = keyword();
        if (k == "bool") wb.outputs = OutputKind::boolean;
        else if (k == "rational") wb.outputs = OutputKind::rational;
        else fail("expected 'bool' or 'rational'", t);
        optional(";");
      } else if (kw == "alphabet") {
        wb.alphabet = parse_alphabet();
      } else if (kw == "theory") {
        theory_at = pos_;
        skip_block_or_statement();
      } else if (kw == "rules") {
        rules_at = pos_;
        skip_block_or_statement();
      } else if (kw == "system") {
        system_at = pos_;
        skip_block_or_statement();
      } else if (kw == "grammar") {
        grammar_at = pos_;
        skip_block_or_statement();
      } else {
        fail("unknown block '" + kw + "'", t);
      }
    }
    // Later blocks depend on the signature and alphabet wherever they appear.
    if (grammar_at && !wb.signature) wb.signature = cfg_signature();
    if (theory_at) {
      pos_ = *theory_at;
      wb.theory_decl = parse_theory(wb);
    }
    if (wb.signature) wb.theory = build_theory(*wb.signature, wb.theory_decl, theory_at);
    if (rules_at) {
      pos_ = *rules_at;
      wb.law = parse_rules(wb);
    }
    if (grammar_at) {
      pos_ = *grammar_at;
      wb.grammar = parse_grammar(wb);
    }
    if (system_at) {
      pos_ = *system_at;
      wb.system = parse_system(wb);
    } else if (wb.grammar) {
      std::optional<DistLaw> law = wb.law;
      TheoryHandle th = wb.theory_decl.kind == "free" ? nullptr : wb.theory;
      wb.system = to_corec(*wb.grammar, law, th);
      if (!wb.law) {
        wb.law = wb.system->law;
        wb.outputs = OutputKind::boolean;
      }
      if (!th) wb.theory = wb.system->theory;
    }
    return wb;
  }

  /// A single term over `sig`; variables are any undeclared identifiers.
  static Term parse_term(const std::string& src, const Signature& sig) {
    Parser p(src);
    Term t = p.term(sig, {}, "");
    if (!p.at_end()) p.fail("unexpected '" + p.peek().text + "'", p.peek());
    return t;
  }

 private:
  // -------------------------------------------------------------- tokens

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  const Token& next() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }
  bool is(const std::string& text, std::size_t k = 0) const {
    return peek(k).kind != Token::Kind::end && peek(k).text == text;
  }
  bool optional(const std::string& text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  const Token& expect(const std::string& text) {
    if (!is(text)) fail("expected '" + text + "' but found '" + peek().text + "'", peek());
    return next();
  }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw parse_error(msg, t.line, t.column); }

  std::string ident() {
    if (peek().kind != Token::Kind::ident) fail("expected a name but found '" + peek().text + "'", peek());
    return next().text;
  }

  /// An identifier, joining adjacent hyphenated parts (simple-sos).
  std::string keyword() {
    std::string out = ident();
    while (is("-") && peek(1).kind == Token::Kind::ident && peek().offset == toks_[pos_ - 1].offset + toks_[pos_ - 1].text.size() &&
           peek(1).offset == peek().offset + 1) {
      next();
      out += "-" + next().text;
    }
    return out;
  }

  /// Operator symbols, names and numerals all name symbols.
  std::string symbol() {
    const Token& t = peek();
    if (t.kind == Token::Kind::end || std::string_view("{}()[];:,=/").find(t.text) != std::string_view::npos ||
        t.text == "=>" || t.text == "->")
      fail("expected a symbol but found '" + t.text + "'", t);
    return next().text;
  }

  std::size_t natural() {
    const Token& t = peek();
    if (t.kind != Token::Kind::number || t.text.find('.') != std::string::npos) fail("expected a natural number", t);
    return std::stoul(next().text);
  }

  Rational number() {
    bool negative = optional("-");
    const Token& t = peek();
    if (t.kind != Token::Kind::number) fail("expected a number", t);
    Rational q = parse_rational(next().text);
    if (optional("/")) {
      const Token& d = peek();
      Rational den = parse_rational(next().text);
      if (d.kind != Token::Kind::number || den == 0) fail("bad denominator", d);
      q /= den;
    }
    return negative ? Rational(-q) : q;
  }

  void skip_block_or_statement() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = next();
      if (t.text == "{") ++depth;
      else if (t.text == "}") {
        if (--depth == 0) return;
      } else if (t.text == ";" && depth == 0) {
        return;
      }
    }
    if (depth > 0) fail("unclosed block", peek());
  }

  // -------------------------------------------------------------- blocks

  Signature parse_signature() {
    Signature sig;
    expect("{");
    while (!optional("}")) {
      const Token& at = peek();
      std::string kw = keyword();
      try {
        if (kw == "op") {
          std::string sym = symbol();
          expect("/");
          std::size_t arity = natural();
          std::optional<int> infix;
          if (is("infix")) {
            next();
            infix = static_cast<int>(natural());
          }
          sig.add_op(sym, arity, infix);
        } else if (kw == "family") {
          std::string name = ident();
          expect(":");
          std::string dom = keyword();
          if (dom != "rational" && dom != "atom") fail("family domain must be 'rational' or 'atom'", at);
          sig.add_family(name, dom == "rational" ? IndexDomain::rational : IndexDomain::atom);
        } else {
          fail("expected 'op' or 'family'", at);
        }
      } catch (const parse_error&) {
        throw;
      } catch (const error& e) {
        fail(e.what(), at);
      }
      optional(";");
    }
    return sig;
  }

  Alphabet parse_alphabet() {
    Alphabet out;
    expect("{");
    while (!optional("}")) {
      out.push_back(symbol());
      optional(",");
    }
    if (out.empty()) fail("empty alphabet", peek());
    return out;
  }

  TheoryDecl parse_theory(const Workbench& wb) {
    TheoryDecl d;
    const Token& at = peek();
    d.kind = keyword();
    if (!wb.signature) fail("theory needs a signature block", at);
    const Signature& sig = *wb.signature;
    if (d.kind == "free") {
      optional(";");
    } else if (d.kind == "commutative-semiring" || d.kind == "idempotent-semiring") {
      if (d.kind == "commutative-semiring") d.roles = {"+", "*", "", "", ""};
      else d.roles = {"+", sig.find_op(".") && !sig.find_op("*") ? "." : "*", "", "0", "1"};
      if (optional("{")) {
        while (!optional("}")) {
          const Token& r = peek();
          std::string role = keyword();
          expect("=");
          std::string sym = symbol();
          if (role == "plus") d.roles.plus = sym;
          else if (role == "times") d.roles.times = sym;
          else if (role == "scalar") d.roles.scalar = sym;
          else if (role == "zero") d.roles.zero = sym;
          else if (role == "one") d.roles.one = sym;
          else fail("unknown role '" + role + "'", r);
          optional(";");
        }
      } else {
        optional(";");
      }
    } else if (d.kind == "generic") {
      expect("{");
      while (!optional("}")) {
        const Token& item = peek();
        std::string kw = keyword();
        if (kw == "eq") {
          std::string name = ident();
          expect(":");
          Term l = term(sig, {}, "");
          expect("=");
          Term r = term(sig, {}, "");
          d.equations.push_back(make_scheme(name, l, r));
        } else if (kw == "model") {
          d.model = parse_model(sig);
        } else if (kw == "depth") {
          d.limits.depth = natural();
        } else if (kw == "cap") {
          d.limits.cap = natural();
        } else {
          fail("unknown theory item '" + kw + "'", item);
        }
        optional(";");
      }
    } else {
      fail("unknown theory '" + d.kind + "'", at);
    }
    return d;
  }

  FiniteModel parse_model(const Signature& sig) {
    FiniteModel m;
    expect("{");
    while (!optional("}")) {
      const Token& at = peek();
      if (is("size")) {
        next();
        m.size = natural();
      } else {
        std::string sym = symbol();
        if (!sig.find_op(sym)) throw unknown_symbol("model interprets undeclared symbol '" + sym + "'", at.line, at.column);
        expect("=");
        std::vector<std::size_t> table;
        if (optional("[")) {
          while (!optional("]")) {
            table.push_back(natural());
            optional(",");
          }
        } else {
          table.push_back(natural());
        }
        m.tables[sym] = std::move(table);
      }
      optional(";");
    }
    return m;
  }

  TheoryHandle build_theory(const Signature& sig, const TheoryDecl& d, std::optional<std::size_t> at) {
    try {
      if (d.kind == "commutative-semiring") return commutative_semiring(sig, d.roles);
      if (d.kind == "idempotent-semiring") return idempotent_semiring(sig, d.roles);
      if (d.kind == "generic") return generic_theory(sig, d.equations, d.model, d.limits);
      return free_theory(sig);
    } catch (const error& e) {
      const Token& t = at ? toks_[*at] : peek();
      throw parse_error(e.what(), t.line, t.column);
    }
  }

  DistLaw parse_rules(const Workbench& wb) {
    const Token& at = peek();
    if (!wb.signature) fail("rules need a signature block", at);
    if (!wb.outputs) fail("rules need an outputs declaration", at);
    const Signature& sig = *wb.signature;
    GsosSpec spec;
    std::string fmt = keyword();
    if (fmt == "simple-sos") spec.format = RuleFormat::simple_sos;
    else if (fmt == "gsos") spec.format = RuleFormat::gsos;
    else fail("expected 'simple-sos' or 'gsos'", at);
    expect("{");
    while (!optional("}")) {
      const Token& rt = peek();
      if (keyword() != "rule") fail("expected 'rule'", rt);
      spec.rules.push_back(parse_rule(sig, spec.format));
      optional(";");
    }
    try {
      return DistLaw(sig, wb.alphabet, OutputAlgebra::of(*wb.outputs), std::move(spec));
    } catch (const error& e) {
      throw parse_error(e.what(), at.line, at.column);
    }
  }

  Rule parse_rule(const Signature& sig, RuleFormat fmt) {
    Rule r;
    const Token& head = peek();
    if (head.kind == Token::Kind::ident && is("[", 1)) {
      r.symbol = ident();
      if (!sig.find_family(r.symbol)) throw unknown_symbol("undeclared family '" + r.symbol + "'", head.line, head.column);
      r.family = true;
      expect("[");
      r.index_param = ident();
      expect("]");
    } else {
      r.symbol = symbol();
      const auto* op = sig.find_op(r.symbol);
      if (!op) throw unknown_symbol("undeclared symbol '" + r.symbol + "'", head.line, head.column);
      if (optional("(")) {
        while (!optional(")")) {
          std::string x = ident();
          ArgPattern a{x, "o" + x, "d" + x};
          if (optional(":")) {
            do {
              const Token& k = peek();
              std::string key = ident();
              expect("=");
              std::string val = ident();
              if (key == "o") a.out = val;
              else if (key == "d") a.deriv = val;
              else fail("expected 'o' or 'd'", k);
            } while (optional(","));
          }
          r.args.push_back(std::move(a));
          optional(";");
        }
      }
      if (op->arity != r.args.size())
        throw arity_mismatch("rule for '" + r.symbol + "' binds " + std::to_string(r.args.size()) + " arguments, arity is " +
                                 std::to_string(op->arity),
                             head.line, head.column);
    }
    (void)fmt;
    expect("=>");
    if (ident() != "out") fail("expected 'out'", toks_[pos_ - 1]);
    expect("=");
    r.out = output_expr();
    expect(";");
    if (ident() != "next") fail("expected 'next'", toks_[pos_ - 1]);
    std::string letter;
    if (optional("(")) {
      letter = ident();
      expect(")");
    }
    expect("=");
    std::set<std::string> derivs;
    for (const auto& a : r.args) derivs.insert(a.deriv);
    r.next = next_expr(sig, derivs, letter);
    return r;
  }

  NextExpr next_expr(const Signature& sig, const std::set<std::string>& derivs, const std::string& letter) {
    if (is("case")) {
      next();
      std::string tok = ident();
      expect("{");
      std::optional<NextExpr> branch[2];
      while (!optional("}")) {
        const Token& b = peek();
        std::size_t k = natural();
        if (k > 1 || branch[k]) fail("branches are 0 and 1, once each", b);
        expect("=>");
        branch[k] = next_expr(sig, derivs, letter);
        optional(";");
      }
      if (!branch[0] || !branch[1]) fail("a case needs branches 0 and 1", peek());
      return NextExpr::split(tok, *branch[0], *branch[1]);
    }
    return NextExpr::of(term(sig, derivs, letter));
  }

  OutputExpr output_expr(int min_prec = 0) {
    OutputExpr lhs = output_primary();
    while (true) {
      int prec = is("+") || is("-") ? 10 : is("*") ? 20 : -1;
      if (prec < min_prec || prec < 0) return lhs;
      std::string op = next().text;
      OutputExpr rhs = output_expr(prec + 1);
      lhs = OutputExpr::apply(op, {lhs, rhs});
    }
  }

  OutputExpr output_primary() {
    if (optional("(")) {
      OutputExpr e = output_expr();
      expect(")");
      return e;
    }
    if (is("-") && peek(1).kind == Token::Kind::number) return OutputExpr::constant(number());
    if (is("-")) {
      next();
      return OutputExpr::apply("neg", {output_primary()});
    }
    if (peek().kind == Token::Kind::number) return OutputExpr::constant(number());
    std::string name = ident();
    if (optional("(")) {
      std::vector<OutputExpr> args;
      while (!optional(")")) {
        args.push_back(output_expr());
        optional(",");
      }
      return OutputExpr::apply(name, std::move(args));
    }
    return OutputExpr::token(name);
  }

  CorecSystem parse_system(const Workbench& wb) {
    const Token& at = peek();
    if (!wb.signature || !wb.law) fail("a system needs signature and rules blocks", at);
    const Signature& sig = *wb.signature;
    const DistLaw& law = *wb.law;
    CorecSystem sys{{}, {}, law, wb.theory_decl.kind == "free" ? nullptr : wb.theory};
    expect("{");
    while (!optional("}")) {
      const Token& vt = peek();
      std::string x = ident();
      if (sys.phi.count(x)) fail("equation for '" + x + "' given twice", vt);
      expect(":");
      if (ident() != "out") fail("expected 'out'", toks_[pos_ - 1]);
      expect("=");
      const Token& ot = peek();
      Output out;
      try {
        out = law.outputs().normalize(output_expr(), {});
      } catch (const error& e) {
        fail(e.what(), ot);
      }
      expect(";");
      BehaviourStep<Term> step{out, {}};
      while (is("next")) {
        next();
        std::vector<Letter> letters = law.alphabet();
        if (optional("(")) {
          const Token& lt = peek();
          Letter a = symbol();
          if (std::find(law.alphabet().begin(), law.alphabet().end(), a) == law.alphabet().end())
            fail("letter '" + a + "' is not in the alphabet", lt);
          letters = {a};
          expect(")");
        }
        expect("=");
        Term t = term(sig, {}, "");
        for (const auto& a : letters) step.next.insert_or_assign(a, t);
        optional(";");
      }
      sys.variables.push_back(x);
      sys.phi.emplace(x, std::move(step));
    }
    try {
      sys.validate();
    } catch (const error& e) {
      fail(e.what(), at);
    }
    return sys;
  }

  GnfGrammar parse_grammar(const Workbench& wb) {
    GnfGrammar g;
    g.alphabet = wb.alphabet;
    const Signature& sig = *wb.signature;
    auto declare = [&](const std::string& x) {
      if (std::find(g.nonterminals.begin(), g.nonterminals.end(), x) == g.nonterminals.end()) g.nonterminals.push_back(x);
    };
    bool has_start = false;
    const Token& at = peek();
    expect("{");
    while (!optional("}")) {
      const Token& it = peek();
      if (is("start")) {
        next();
        g.start = term(sig, {}, "");
        has_start = true;
      } else {
        std::string x = ident();
        declare(x);
        if (optional(":")) {
          if (ident() != "empty") fail("expected 'empty'", toks_[pos_ - 1]);
          expect("=");
          std::size_t b = natural();
          if (b > 1) fail("empty is 0 or 1", it);
          g.empty[x] = b == 1;
        } else {
          expect("-");
          const Token& lt = peek();
          Letter a = symbol();
          if (std::find(g.alphabet.begin(), g.alphabet.end(), a) == g.alphabet.end())
            fail("letter '" + a + "' is not in the alphabet", lt);
          expect("->");
          SymbolWord w;
          if (is("eps")) {
            next();
          } else {
            while (peek().kind == Token::Kind::ident) w.push_back(ident());
            if (w.empty()) fail("expected nonterminals or 'eps'", peek());
          }
          for (const auto& y : w) declare(y);
          g.prods[x][a].insert(std::move(w));
        }
      }
      optional(";");
    }
    if (!has_start) {
      if (g.nonterminals.empty()) fail("empty grammar", at);
      g.start = Term::var(g.nonterminals.front());
    }
    for (const auto& x : g.nonterminals) g.empty.try_emplace(x, false);
    try {
      g.validate();
    } catch (const error& e) {
      fail(e.what(), at);
    }
    return g;
  }

  // -------------------------------------------------------------- terms

  /// Precedence climbing over the declared infix operators. `derivs` are
  /// placeholders that may be applied to the bound `letter`.
  Term term(const Signature& sig, const std::set<std::string>& derivs, const std::string& letter, int min_prec = 0) {
    Term lhs = term_primary(sig, derivs, letter);
    while (true) {
      const Token& t = peek();
      if (t.kind == Token::Kind::end) return lhs;
      const auto* op = sig.find_op(t.text);
      if (!op || !op->infix_precedence || *op->infix_precedence < min_prec) return lhs;
      next();
      Term rhs = term(sig, derivs, letter, *op->infix_precedence + 1);
      lhs = Term::app(op->symbol, {lhs, rhs});
    }
  }

  Term term_primary(const Signature& sig, const std::set<std::string>& derivs, const std::string& letter) {
    const Token& t = peek();
    if (optional("(")) {
      Term inner = term(sig, derivs, letter);
      expect(")");
      return inner;
    }
    if (is("[")) {
      const auto* fam = sig.bracket_family();
      if (!fam) throw unknown_symbol("no rational family for '[...]'", t.line, t.column);
      next();
      ScalarPoly p = index_expr();
      expect("]");
      return Term::indexed(fam->name, p);
    }
    if (t.kind == Token::Kind::end) fail("unexpected end of input", t);
    if (t.kind == Token::Kind::ident && is("[", 1)) {
      const auto* fam = sig.find_family(t.text);
      if (!fam) throw unknown_symbol("undeclared family '" + t.text + "'", t.line, t.column);
      next();
      next();
      Index idx;
      if (fam->domain == IndexDomain::rational) idx = index_expr();
      else idx = ident();
      expect("]");
      return Term::indexed(fam->name, idx);
    }
    if (const auto* op = sig.find_op(t.text)) {
      next();
      if (op->arity == 0 && !is("(")) return Term::app(op->symbol);
      expect("(");
      std::vector<Term> args;
      while (!is(")")) {
        args.push_back(term(sig, derivs, letter));
        if (!optional(",")) break;
      }
      expect(")");
      if (args.size() != op->arity)
        throw arity_mismatch("'" + op->symbol + "' has arity " + std::to_string(op->arity) + " but is applied to " +
                                 std::to_string(args.size()) + " arguments",
                             t.line, t.column);
      return Term::app(op->symbol, std::move(args));
    }
    if (t.kind != Token::Kind::ident) throw unknown_symbol("undeclared symbol '" + t.text + "'", t.line, t.column);
    next();
    if (is("(")) {
      if (!derivs.count(t.text)) throw unknown_symbol("undeclared symbol '" + t.text + "'", t.line, t.column);
      next();
      const Token& lt = peek();
      std::string a = ident();
      if (a != letter) fail("derivatives are taken at the rule's letter '" + letter + "'", lt);
      expect(")");
    }
    return Term::var(t.text);
  }

  ScalarPoly index_expr(int min_prec = 0) {
    ScalarPoly lhs = index_primary();
    while (true) {
      int prec = is("+") || is("-") ? 10 : is("*") || is("/") ? 20 : is("^") ? 30 : -1;
      if (prec < 0 || prec < min_prec) return lhs;
      const Token& op = next();
      if (op.text == "^") {
        ScalarPoly base = lhs;
        for (std::size_t k = natural(); k > 1; --k) lhs = lhs * base;
        continue;
      }
      ScalarPoly rhs = index_expr(prec + 1);
      if (op.text == "+") lhs = lhs + rhs;
      else if (op.text == "-") lhs = lhs - rhs;
      else if (op.text == "*") lhs = lhs * rhs;
      else {
        if (!rhs.is_constant() || rhs.is_zero()) fail("division by a non-constant or zero", op);
        lhs = lhs.scaled(Rational(1) / rhs.constant_term());
      }
    }
  }

  ScalarPoly index_primary() {
    if (optional("(")) {
      ScalarPoly p = index_expr();
      expect(")");
      return p;
    }
    if (optional("-")) return -index_primary();
    if (peek().kind == Token::Kind::number) return scalar(parse_rational(next().text));
    return scalar_token(ident());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace dsl

inline Workbench parse_workbench(const std::string& source) { return dsl::Parser(source).parse(); }

inline Workbench load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_workbench(ss.str());
  } catch (const parse_error& e) {
    throw parse_error(path + ":" + e.what(), e.line, e.column);
  }
}

inline Term parse_term(const std::string& src, const Signature& sig) { return dsl::Parser::parse_term(src, sig); }

/// Splits a word into letters: per character when every letter is one
/// character long, otherwise at commas or spaces.
inline Word parse_word(const std::string& text, const Alphabet& alphabet) {
  Word w;
  bool single = std::all_of(alphabet.begin(), alphabet.end(), [](const Letter& a) { return a.size() == 1; });
  if (single) {
    for (char c : text)
      if (c != ' ' && c != ',') w.emplace_back(1, c);
  } else {
    std::string cur;
    for (char c : text + ",") {
      if (c == ',' || c == ' ') {
        if (!cur.empty()) w.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  for (const auto& a : w)
    if (std::find(alphabet.begin(), alphabet.end(), a) == alphabet.end())
      throw alphabet_mismatch("letter '" + a + "' is not in the alphabet");
  return w;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string print_next(const NextExpr& n, const Signature& sig) {
  if (!n.is_case()) return to_string(n.term, sig);
  return "case " + n.token + " { 0 => " + print_next(n.branches[0], sig) + "; 1 => " + print_next(n.branches[1], sig) + " }";
}

}  // namespace detail

/// Canonical text of a workbench; loading it gives back an equal one.
inline std::string print_workbench(const Workbench& wb) {
  std::string out;
  if (wb.signature) {
    out += "signature {\n";
    for (const auto& op : wb.signature->ops()) {
      out += "  op " + op.symbol + "/" + std::to_string(op.arity);
      if (op.infix_precedence) out += " infix " + std::to_string(*op.infix_precedence);
      out += ";\n";
    }
    for (const auto& f : wb.signature->families())
      out += "  family " + f.name + " : " + (f.domain == IndexDomain::rational ? "rational" : "atom") + ";\n";
    out += "}\n";
  }
  if (wb.outputs) out += std::string("outputs ") + (*wb.outputs == OutputKind::boolean ? "bool" : "rational") + ";\n";
  out += "alphabet {";
  for (std::size_t i = 0; i < wb.alphabet.size(); ++i) out += (i ? ", " : " ") + wb.alphabet[i];
  out += " }\n";
  const auto& d = wb.theory_decl;
  const Signature* sig = wb.signature ? &*wb.signature : nullptr;
  if (d.kind == "commutative-semiring" || d.kind == "idempotent-semiring") {
    out += "theory " + d.kind + " {";
    auto role = [&](const char* name, const std::string& v) {
      if (!v.empty()) out += std::string(" ") + name + " = " + v + ";";
    };
    role("plus", d.roles.plus);
    role("times", d.roles.times);
    role("scalar", d.roles.scalar);
    role("zero", d.roles.zero);
    role("one", d.roles.one);
    out += " }\n";
  } else if (d.kind == "generic") {
    out += "theory generic {\n";
    for (const auto& e : d.equations)
      out += "  eq " + e.name + ": " + to_string(e.lhs, sig) + " = " + to_string(e.rhs, sig) + ";\n";
    if (d.model) {
      out += "  model { size " + std::to_string(d.model->size) + ";";
      for (const auto& [sym, table] : d.model->tables) {
        const auto* op = sig ? sig->find_op(sym) : nullptr;
        out += " " + sym + " = ";
        if (op && op->arity == 0 && table.size() == 1) {
          out += std::to_string(table.front()) + ";";
          continue;
        }
        out += "[";
        for (std::size_t i = 0; i < table.size(); ++i) out += (i ? ", " : "") + std::to_string(table[i]);
        out += "];";
      }
      out += " }\n";
    }
    out += "  depth " + std::to_string(d.limits.depth) + ";\n  cap " + std::to_string(d.limits.cap) + ";\n}\n";
  } else if (sig) {
    out += "theory free;\n";
  }
  if (wb.law && sig) {
    out += "rules " + to_string(wb.law->spec().format) + " {\n";
    for (const auto& r : wb.law->spec().rules) {
      out += "  rule " + r.symbol;
      if (r.family) out += "[" + r.index_param + "]";
      if (!r.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < r.args.size(); ++i)
          out += (i ? "; " : "") + r.args[i].arg + ": o=" + r.args[i].out + ", d=" + r.args[i].deriv;
        out += ")";
      }
      out += " => out = " + r.out.to_string() + "; next = " + detail::print_next(r.next, *sig) + ";\n";
    }
    out += "}\n";
  }
  if (wb.system && sig && !wb.grammar) {
    out += "system {\n";
    for (const auto& x : wb.system->variables) {
      const auto& step = wb.system->phi.at(x);
      out += "  " + x + ": out = " + step.output.to_string() + ";";
      bool uniform = true;
      for (const auto& [a, t] : step.next) uniform = uniform && t == step.next.begin()->second;
      if (uniform) out += " next = " + to_string(step.next.begin()->second, sig) + ";";
      else
        for (const auto& [a, t] : step.next) out += " next(" + a + ") = " + to_string(t, sig) + ";";
      out += "\n";
    }
    out += "}\n";
  }
  if (wb.grammar) {
    const auto& g = *wb.grammar;
    out += "grammar {\n";
    for (const auto& x : g.nonterminals) out += "  " + x + ": empty = " + (g.nullable(x) ? "1" : "0") + ";\n";
    for (const auto& x : g.nonterminals)
      for (const auto& a : g.alphabet)
        for (const auto& w : g.productions(x, a)) {
          out += "  " + x + " -" + a + "-> ";
          if (w.empty()) out += "eps";
          for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + w[i];
          out += ";\n";
        }
    out += "  start " + to_string(g.start, sig) + ";\n}\n";
  }
  return out;
}

}  // namespace eqlaw
