#pragma once

// Moore behaviour F = B x Id^A: outputs, steps, relation lifting and the
// copointed pairing Id x F.

#include "eqlaw/errors.hpp"
#include "eqlaw/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace eqlaw {

using Letter = std::string;
using Alphabet = std::vector<Letter>;
using Word = std::vector<Letter>;

/// Canonical Boolean function: sorted essential variables plus a truth table
/// indexed by the assignment bits (bit i is vars[i]).
class BoolFunction {
 public:
  static BoolFunction constant(bool b) {
    BoolFunction f;
    f.table_ = {b};
    return f;
  }
  static BoolFunction variable(std::string name) {
    BoolFunction f;
    f.vars_ = {std::move(name)};
    f.table_ = {false, true};
    return f;
  }

  const std::vector<std::string>& variables() const { return vars_; }
  bool is_constant() const { return vars_.empty(); }
  std::optional<bool> constant_value() const {
    if (!vars_.empty()) return std::nullopt;
    return table_[0];
  }

  bool evaluate(const std::map<std::string, bool>& env) const {
    std::size_t row = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto it = env.find(vars_[i]);
      if (it == env.end()) throw unbound_variable(vars_[i]);
      if (it->second) row |= std::size_t{1} << i;
    }
    return table_[row];
  }

  /// Pointwise combination, reduced to essential variables.
  static BoolFunction combine(std::span<const BoolFunction> fs,
                              const std::function<bool(const std::vector<bool>&)>& op) {
    std::vector<std::string> vars;
    for (const auto& f : fs) vars.insert(vars.end(), f.vars_.begin(), f.vars_.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > 20) throw error("Boolean output depends on too many tokens");
    BoolFunction out;
    out.vars_ = vars;
    out.table_.resize(std::size_t{1} << vars.size());
    std::vector<bool> argv(fs.size());
    for (std::size_t row = 0; row < out.table_.size(); ++row) {
      std::map<std::string, bool> env;
      for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = (row >> i) & 1;
      for (std::size_t i = 0; i < fs.size(); ++i) argv[i] = fs[i].evaluate(env);
      out.table_[row] = op(argv);
    }
    out.reduce();
    return out;
  }

  friend bool operator==(const BoolFunction&, const BoolFunction&) = default;
  friend bool operator<(const BoolFunction& a, const BoolFunction& b) {
    if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
    return a.table_ < b.table_;
  }

  /// Constants print as 0/1; otherwise the minterm DNF.
  std::string to_string() const {
    if (vars_.empty()) return table_[0] ? "1" : "0";
    std::string out;
    for (std::size_t row = 0; row < table_.size(); ++row) {
      if (!table_[row]) continue;
      if (!out.empty()) out += " | ";
      std::string term;
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!term.empty()) term += "&";
        term += ((row >> i) & 1) ? vars_[i] : "!" + vars_[i];
      }
      out += term;
    }
    return out;
  }

 private:
  void reduce() {
    for (std::size_t i = vars_.size(); i-- > 0;) {
      const std::size_t bit = std::size_t{1} << i;
      bool essential = false;
      for (std::size_t row = 0; row < table_.size() && !essential; ++row)
        if (!(row & bit) && table_[row] != table_[row | bit]) essential = true;
      if (essential) continue;
      std::vector<bool> reindexed(table_.size() / 2);
      for (std::size_t row = 0; row < table_.size(); ++row) {
        if (row & bit) continue;
        std::size_t low = row & (bit - 1);
        std::size_t high = (row >> (i + 1)) << i;
        reindexed[high | low] = table_[row];
      }
      table_ = std::move(reindexed);
      vars_.erase(vars_.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  std::vector<std::string> vars_;
  std::vector<bool> table_;
};

enum class OutputKind { boolean, rational };

/// An element of B, concrete or symbolic over output tokens. Rational
/// outputs are polynomials over Q, Boolean outputs are Boolean functions;
/// both representations are canonical so equality is semantic equality.
class Output {
 public:
  Output() : value_(ScalarPoly()) {}
  static Output boolean(bool b) { return Output(BoolFunction::constant(b)); }
  static Output boolean(BoolFunction f) { return Output(std::move(f)); }
  static Output rational(const Rational& q) { return Output(ScalarPoly(q)); }
  static Output rational(ScalarPoly p) { return Output(std::move(p)); }

  OutputKind kind() const { return std::holds_alternative<BoolFunction>(value_) ? OutputKind::boolean : OutputKind::rational; }
  bool is_boolean() const { return kind() == OutputKind::boolean; }
  bool is_concrete() const {
    if (const auto* f = std::get_if<BoolFunction>(&value_)) return f->is_constant();
    return std::get<ScalarPoly>(value_).is_constant();
  }
  std::optional<bool> as_bool() const {
    if (const auto* f = std::get_if<BoolFunction>(&value_)) return f->constant_value();
    return std::nullopt;
  }
  std::optional<Rational> as_rational() const {
    if (const auto* p = std::get_if<ScalarPoly>(&value_); p && p->is_constant()) return p->constant_term();
    return std::nullopt;
  }
  const ScalarPoly& poly() const { return std::get<ScalarPoly>(value_); }
  const BoolFunction& function() const { return std::get<BoolFunction>(value_); }

  friend bool operator==(const Output&, const Output&) = default;
  friend bool operator<(const Output& a, const Output& b) { return a.value_ < b.value_; }

  std::string to_string() const {
    if (const auto* f = std::get_if<BoolFunction>(&value_)) return f->to_string();
    return std::get<ScalarPoly>(value_).to_string();
  }

 private:
  explicit Output(BoolFunction f) : value_(std::move(f)) {}
  explicit Output(ScalarPoly p) : value_(std::move(p)) {}
  std::variant<BoolFunction, ScalarPoly> value_;
};

/// Output expression as written in rules: constants, output tokens and
/// applications of the output algebra's operations.
struct OutputExpr {
  enum class Kind { constant, token, apply };
  Kind kind = Kind::constant;
  Rational value;
  std::string name;  // token or operation
  std::vector<OutputExpr> args;

  static OutputExpr constant(Rational v) { return {Kind::constant, std::move(v), {}, {}}; }
  static OutputExpr token(std::string n) { return {Kind::token, 0, std::move(n), {}}; }
  static OutputExpr apply(std::string op, std::vector<OutputExpr> args) {
    return {Kind::apply, 0, std::move(op), std::move(args)};
  }

  void collect_tokens(std::vector<std::string>& out) const {
    if (kind == Kind::token && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    for (const auto& a : args) a.collect_tokens(out);
  }

  friend bool operator==(const OutputExpr&, const OutputExpr&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::constant:
        return eqlaw::to_string(value);
      case Kind::token:
        return name;
      case Kind::apply:
        break;
    }
    if ((name == "+" || name == "*" || name == "-") && args.size() == 2) {
      auto side = [&](const OutputExpr& e, bool right) {
        bool inner_sum = e.kind == Kind::apply && e.args.size() == 2 && (e.name == "+" || e.name == "-");
        bool parens = inner_sum && (name == "*" || right);
        return parens ? "(" + e.to_string() + ")" : e.to_string();
      };
      std::string op = name == "*" ? "*" : " " + name + " ";
      return side(args[0], false) + op + side(args[1], true);
    }
    std::string out = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].to_string();
    return out + ")";
  }
};

/// The output object B with its operation table.
class OutputAlgebra {
 public:
  struct Operation {
    std::size_t arity;
    std::function<Output(std::span<const Output>)> apply;    // symbolic
    std::function<Rational(std::span<const Rational>)> eval;  // pointwise
  };

  static OutputAlgebra booleans() {
    OutputAlgebra a(OutputKind::boolean);
    auto lattice = [](bool is_max) {
      return Operation{
          2,
          [is_max](std::span<const Output> xs) {
            std::vector<BoolFunction> fs;
            for (const auto& x : xs) fs.push_back(x.function());
            return Output::boolean(BoolFunction::combine(fs, [is_max](const std::vector<bool>& v) {
              return is_max ? (v[0] || v[1]) : (v[0] && v[1]);
            }));
          },
          [is_max](std::span<const Rational> v) { return is_max ? std::max(v[0], v[1]) : std::min(v[0], v[1]); }};
    };
    a.ops_.emplace("max", lattice(true));
    a.ops_.emplace("min", lattice(false));
    a.samples_ = {Output::boolean(false), Output::boolean(true)};
    return a;
  }

  static OutputAlgebra rationals() {
    OutputAlgebra a(OutputKind::rational);
    a.ops_.emplace("+", Operation{2, [](std::span<const Output> x) { return Output::rational(x[0].poly() + x[1].poly()); },
                                  [](std::span<const Rational> v) { return Rational(v[0] + v[1]); }});
    a.ops_.emplace("*", Operation{2, [](std::span<const Output> x) { return Output::rational(x[0].poly() * x[1].poly()); },
                                  [](std::span<const Rational> v) { return Rational(v[0] * v[1]); }});
    a.ops_.emplace("-", Operation{2, [](std::span<const Output> x) { return Output::rational(x[0].poly() - x[1].poly()); },
                                  [](std::span<const Rational> v) { return Rational(v[0] - v[1]); }});
    a.ops_.emplace("neg", Operation{1, [](std::span<const Output> x) { return Output::rational(-x[0].poly()); },
                                    [](std::span<const Rational> v) { return Rational(-v[0]); }});
    for (int v : {-2, 0, 1, 3}) a.samples_.push_back(Output::rational(v));
    a.samples_.push_back(Output::rational(Rational(1, 2)));
    return a;
  }

  static OutputAlgebra of(OutputKind k) { return k == OutputKind::boolean ? booleans() : rationals(); }

  OutputKind kind() const { return kind_; }
  const std::vector<Output>& samples() const { return samples_; }
  const Operation* find(const std::string& name) const {
    auto it = ops_.find(name);
    return it == ops_.end() ? nullptr : &it->second;
  }
  std::vector<std::string> operation_names() const {
    std::vector<std::string> out;
    for (const auto& [n, op] : ops_) out.push_back(n);
    return out;
  }

  Output constant(const Rational& v) const {
    if (kind_ == OutputKind::rational) return Output::rational(v);
    if (v != 0 && v != 1) throw error("Boolean constant must be 0 or 1, got " + eqlaw::to_string(v));
    return Output::boolean(v == 1);
  }

  /// A fresh symbolic output token.
  Output token(const std::string& name) const {
    return kind_ == OutputKind::rational ? Output::rational(scalar_token(name))
                                         : Output::boolean(BoolFunction::variable(name));
  }

  /// Symbolic normal form of `e` with tokens bound by `env`.
  Output normalize(const OutputExpr& e, const std::map<std::string, Output>& env) const {
    switch (e.kind) {
      case OutputExpr::Kind::constant:
        return constant(e.value);
      case OutputExpr::Kind::token: {
        auto it = env.find(e.name);
        if (it == env.end()) throw unbound_variable(e.name);
        if (it->second.kind() != kind_) throw error("output token '" + e.name + "' has the wrong carrier");
        return it->second;
      }
      case OutputExpr::Kind::apply:
        break;
    }
    const auto* op = find(e.name);
    if (!op || op->arity != e.args.size()) throw error("unknown output operation '" + e.name + "'");
    std::vector<Output> xs;
    for (const auto& a : e.args) xs.push_back(normalize(a, env));
    return op->apply(xs);
  }

  /// Pointwise evaluation; Booleans are 0/1.
  Rational evaluate(const OutputExpr& e, const std::map<std::string, Rational>& env) const {
    switch (e.kind) {
      case OutputExpr::Kind::constant:
        return e.value;
      case OutputExpr::Kind::token: {
        auto it = env.find(e.name);
        if (it == env.end()) throw unbound_variable(e.name);
        return it->second;
      }
      case OutputExpr::Kind::apply:
        break;
    }
    const auto* op = find(e.name);
    if (!op || op->arity != e.args.size()) throw error("unknown output operation '" + e.name + "'");
    std::vector<Rational> xs;
    for (const auto& a : e.args) xs.push_back(evaluate(a, env));
    return op->eval(xs);
  }

  /// Value of a symbolic output under a concrete token assignment.
  Rational evaluate(const Output& o, const std::map<std::string, Rational>& env) const {
    if (o.is_boolean()) {
      std::map<std::string, bool> b;
      for (const auto& [k, v] : env) b[k] = v != 0;
      return o.function().evaluate(b) ? 1 : 0;
    }
    return o.poly().evaluate([&](const std::string& t) {
      auto it = env.find(t);
      if (it == env.end()) throw unbound_variable(t);
      return it->second;
    });
  }

 private:
  explicit OutputAlgebra(OutputKind k) : kind_(k) {}
  OutputKind kind_;
  std::map<std::string, Operation> ops_;
  std::vector<Output> samples_;
};

/// One observation: an output and a successor per letter.
template <class S>
struct BehaviourStep {
  Output output;
  std::map<Letter, S> next;

  friend bool operator==(const BehaviourStep&, const BehaviourStep&) = default;
};

template <class S>
void check_total(const BehaviourStep<S>& step, const Alphabet& alphabet) {
  if (step.next.size() != alphabet.size())
    throw alphabet_mismatch("step is not defined on exactly the alphabet");
  for (const auto& a : alphabet)
    if (!step.next.count(a)) throw alphabet_mismatch("step has no successor for letter '" + a + "'");
}

/// Rel F(R): equal outputs and pointwise R-related successors.
template <class S, class Rel>
bool relation_lift(Rel&& rel, const BehaviourStep<S>& s1, const BehaviourStep<S>& s2) {
  if (s1.next.size() != s2.next.size()) throw alphabet_mismatch("steps over different alphabets");
  for (const auto& [a, t] : s1.next)
    if (!s2.next.count(a)) throw alphabet_mismatch("letter '" + a + "' missing from second step");
  if (s1.output.kind() != s2.output.kind()) throw alphabet_mismatch("steps over different output carriers");
  if (!(s1.output == s2.output)) return false;
  for (const auto& [a, t] : s1.next)
    if (!rel(t, s2.next.at(a))) return false;
  return true;
}

/// An element of (Id x F)S: the state paired with its observation.
template <class S>
struct Copaired {
  S self;
  BehaviourStep<S> step;

  friend bool operator==(const Copaired&, const Copaired&) = default;
};

template <class S>
Copaired<S> copair(S x, BehaviourStep<S> step) {
  return {std::move(x), std::move(step)};
}

/// The counit pi_1.
template <class S>
const S& counit(const Copaired<S>& c) {
  return c.self;
}

}  // namespace eqlaw
