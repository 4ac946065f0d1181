#pragma once

#include "eqlaw/errors.hpp"
#include "eqlaw/polynomial.hpp"

#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <unordered_set>
#include <vector>

namespace eqlaw {

// ---------------------------------------------------------------------------
// Signature

enum class IndexDomain { rational, atom };

struct OpDecl {
  std::string symbol;
  std::size_t arity = 0;
  std::optional<int> infix_precedence;  // binary operators only

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

/// Indexed constant family such as the scalar streams `[a]`.
struct FamilyDecl {
  std::string name;
  IndexDomain domain = IndexDomain::rational;

  friend bool operator==(const FamilyDecl&, const FamilyDecl&) = default;
};

class Signature {
 public:
  Signature() = default;

  Signature& add_op(std::string symbol, std::size_t arity, std::optional<int> infix = std::nullopt) {
    if (declares(symbol)) throw signature_mismatch("duplicate symbol '" + symbol + "'");
    if (infix && arity != 2) throw signature_mismatch("infix symbol '" + symbol + "' must be binary");
    ops_.push_back({std::move(symbol), arity, infix});
    return *this;
  }

  Signature& add_family(std::string name, IndexDomain domain = IndexDomain::rational) {
    if (declares(name)) throw signature_mismatch("duplicate symbol '" + name + "'");
    families_.push_back({std::move(name), domain});
    return *this;
  }

  const std::vector<OpDecl>& ops() const { return ops_; }
  const std::vector<FamilyDecl>& families() const { return families_; }

  const OpDecl* find_op(const std::string& symbol) const {
    for (const auto& op : ops_)
      if (op.symbol == symbol) return &op;
    return nullptr;
  }
  const FamilyDecl* find_family(const std::string& name) const {
    for (const auto& f : families_)
      if (f.name == name) return &f;
    return nullptr;
  }
  bool declares(const std::string& name) const { return find_op(name) || find_family(name); }

  /// The family written `[idx]` without a name: the only rational family.
  const FamilyDecl* bracket_family() const {
    const FamilyDecl* found = nullptr;
    for (const auto& f : families_)
      if (f.domain == IndexDomain::rational) {
        if (found) return nullptr;
        found = &f;
      }
    return found;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<OpDecl> ops_;
  std::vector<FamilyDecl> families_;
};

// ---------------------------------------------------------------------------
// Terms

/// Index of an indexed constant: a (possibly symbolic) rational for rational
/// families, an atom name otherwise.
using Index = std::variant<ScalarPoly, std::string>;

inline std::string index_string(const Index& idx) {
  if (const auto* p = std::get_if<ScalarPoly>(&idx)) return p->to_string();
  return std::get<std::string>(idx);
}

/// Immutable finitely branching tree over a signature; leaves are variables
/// or indexed constants. Nodes are shared, equality is structural.
class Term {
 public:
  enum class Kind { var, app, indexed };

  static Term var(std::string name) { return Term(Kind::var, std::move(name), {}, Index{}); }
  static Term app(std::string symbol, std::vector<Term> args = {}) {
    return Term(Kind::app, std::move(symbol), std::move(args), Index{});
  }
  static Term indexed(std::string family, Index index) {
    return Term(Kind::indexed, std::move(family), {}, std::move(index));
  }
  static Term scalar(std::string family, const Rational& q) { return indexed(std::move(family), ScalarPoly(q)); }

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::var; }
  bool is_app() const { return node_->kind == Kind::app; }
  bool is_indexed() const { return node_->kind == Kind::indexed; }

  /// Variable name, operation symbol, or family name.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  const Index& index() const { return node_->index; }
  const ScalarPoly* scalar_index() const { return is_indexed() ? std::get_if<ScalarPoly>(&node_->index) : nullptr; }

  /// Node count.
  std::size_t size() const { return node_->size; }
  /// Identity of the shared node; equal ids imply equal terms.
  const void* id() const { return node_.get(); }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
    return compare(a, b) == 0;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

  /// Structural total order: kind, name, index, then arguments.
  static int compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
    if (a.is_indexed()) {
      if (a.index() < b.index()) return -1;
      if (b.index() < a.index()) return 1;
      return 0;
    }
    const auto& x = a.args();
    const auto& y = b.args();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
      if (int c = compare(x[i], y[i]); c != 0) return c;
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> args;
    Index index;
    std::size_t size = 1;
    std::size_t hash = 0;
  };

  Term(Kind kind, std::string name, std::vector<Term> args, Index index) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->name = std::move(name);
    n->args = std::move(args);
    n->index = std::move(index);
    std::size_t h = std::hash<std::string>{}(n->name) * 31 + static_cast<std::size_t>(kind);
    for (const auto& a : n->args) {
      n->size += a.size();
      h = h * 1000003u ^ a.hash();
    }
    if (kind == Kind::indexed) h = h * 17 + std::hash<std::string>{}(index_string(n->index));
    n->hash = h;
    node_ = std::move(n);
  }

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Size first, then structure. Used to pick class representatives.
inline bool shortlex_less(const Term& a, const Term& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Calls f once per distinct shared node, in pre-order. Terms built by
/// substitution share subterms heavily, so trees can be exponentially
/// larger than their node graphs.
template <class F>
void visit_distinct(const Term& t, F&& f) {
  std::unordered_set<const void*> seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term u = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(u.id()).second) continue;
    f(u);
    for (auto it = u.args().rbegin(); it != u.args().rend(); ++it) stack.push_back(*it);
  }
}

inline void collect_variables(const Term& t, std::vector<std::string>& out) {
  visit_distinct(t, [&](const Term& u) {
    if (u.is_var() && std::find(out.begin(), out.end(), u.name()) == out.end()) out.push_back(u.name());
  });
}

/// Variables in order of first occurrence.
inline std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  collect_variables(t, out);
  return out;
}

/// Tokens occurring inside symbolic rational indices.
inline std::set<std::string> index_tokens(const Term& t) {
  std::set<std::string> out;
  visit_distinct(t, [&](const Term& u) {
    if (const auto* p = u.scalar_index()) {
      auto g = p->generators();
      out.insert(g.begin(), g.end());
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Validation

inline void validate(const Signature& sig, const Term& t) {
  visit_distinct(t, [&](const Term& u) {
    switch (u.kind()) {
      case Term::Kind::var:
        return;
      case Term::Kind::indexed: {
        const auto* fam = sig.find_family(u.name());
        if (!fam) throw signature_mismatch("undeclared family '" + u.name() + "'");
        bool rational_index = std::holds_alternative<ScalarPoly>(u.index());
        if (rational_index != (fam->domain == IndexDomain::rational))
          throw signature_mismatch("index of '" + u.name() + "' has the wrong domain");
        return;
      }
      case Term::Kind::app: {
        const auto* op = sig.find_op(u.name());
        if (!op) throw signature_mismatch("undeclared symbol '" + u.name() + "'");
        if (op->arity != u.args().size())
          throw signature_mismatch("symbol '" + u.name() + "' has arity " + std::to_string(op->arity) +
                                   ", applied to " + std::to_string(u.args().size()) + " arguments");
        return;
      }
    }
  });
}

inline bool conforms(const Signature& sig, const Term& t) {
  try {
    validate(sig, t);
    return true;
  } catch (const signature_mismatch&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Substitution (the multiplication of the free monad)

using Substitution = std::map<std::string, Term>;

/// Replaces every variable leaf; a leaf missing from `s` is an error.
inline Term substitute(const Term& t, const Substitution& s) {
  switch (t.kind()) {
    case Term::Kind::var: {
      auto it = s.find(t.name());
      if (it == s.end()) throw unbound_variable(t.name());
      return it->second;
    }
    case Term::Kind::indexed:
      return t;
    case Term::Kind::app: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(substitute(a, s));
        changed = changed || !(args.back() == a);
      }
      return changed ? Term::app(t.name(), std::move(args)) : t;
    }
  }
  return t;
}

/// Checked variant: `t` and every image must be terms over `sig`.
inline Term substitute(const Signature& sig, const Term& t, const Substitution& s) {
  validate(sig, t);
  for (const auto& [x, u] : s) validate(sig, u);
  return substitute(t, s);
}

/// Like `substitute`, but leaves unmapped variables in place.
inline Term rename(const Term& t, const Substitution& s) {
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  if (t.is_indexed()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(rename(a, s));
  return Term::app(t.name(), std::move(args));
}

/// Substitutes tokens inside rational indices.
inline Term substitute_indices(const Term& t, const std::map<std::string, ScalarPoly>& values) {
  if (t.is_var()) return t;
  if (const auto* p = t.scalar_index()) {
    return Term::indexed(t.name(), p->substitute<ScalarPoly>([&](const std::string& tok) {
      auto it = values.find(tok);
      return it == values.end() ? scalar_token(tok) : it->second;
    }));
  }
  if (t.is_indexed()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute_indices(a, values));
  return Term::app(t.name(), std::move(args));
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_word_symbol(const std::string& s) {
  return !s.empty() && (std::isalnum(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

inline std::optional<int> infix_of(const Signature* sig, const Term& t) {
  if (!sig || !t.is_app()) return std::nullopt;
  const auto* op = sig->find_op(t.name());
  if (!op || t.args().size() != 2) return std::nullopt;
  return op->infix_precedence;
}

inline void print(const Term& t, const Signature* sig, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::var:
      out += t.name();
      return;
    case Term::Kind::indexed: {
      bool bare = sig && sig->bracket_family() && sig->bracket_family()->name == t.name();
      if (!bare) out += t.name();
      out += "[" + index_string(t.index()) + "]";
      return;
    }
    case Term::Kind::app:
      break;
  }
  if (auto prec = infix_of(sig, t)) {
    auto side = [&](const Term& a, bool right) {
      auto p = infix_of(sig, a);
      bool parens = p && (right ? *p <= *prec : *p < *prec);
      if (parens) out += "(";
      print(a, sig, out);
      if (parens) out += ")";
    };
    bool spaced = t.name() == "+" || is_word_symbol(t.name());
    side(t.args()[0], false);
    out += spaced ? " " + t.name() + " " : t.name();
    side(t.args()[1], true);
    return;
  }
  out += t.name();
  if (t.args().empty()) return;
  out += "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ", ";
    print(t.args()[i], sig, out);
  }
  out += ")";
}

}  // namespace detail

/// Prefix notation; infix for operators the signature declares infix.
inline std::string to_string(const Term& t, const Signature* sig = nullptr) {
  std::string out;
  detail::print(t, sig, out);
  return out;
}
inline std::string to_string(const Term& t, const Signature& sig) { return to_string(t, &sig); }

// ---------------------------------------------------------------------------
// Enumeration

/// Every term with at most `max_size` nodes, each once, ordered by size and
/// then lexicographically by declaration order (variables in the given order
/// first, then nullary symbols, then indexed constants for every sample of
/// a matching domain, then compound terms by symbol).
inline std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<std::string>& vars,
                                         std::size_t max_size,
                                         const std::vector<Index>& index_samples = {}) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  if (max_size >= 1) {
    auto& leaves = by_size[1];
    for (const auto& v : vars) leaves.push_back(Term::var(v));
    for (const auto& op : sig.ops())
      if (op.arity == 0) leaves.push_back(Term::app(op.symbol));
    for (const auto& fam : sig.families())
      for (const auto& idx : index_samples)
        if (std::holds_alternative<ScalarPoly>(idx) == (fam.domain == IndexDomain::rational))
          leaves.push_back(Term::indexed(fam.name, idx));
  }
  for (std::size_t n = 2; n <= max_size; ++n) {
    for (const auto& op : sig.ops()) {
      const std::size_t k = op.arity;
      if (k == 0 || k > n - 1) continue;
      // compositions of n-1 into k positive parts, lexicographic
      std::vector<std::size_t> parts(k, 1);
      parts.back() = n - 1 - (k - 1);
      while (true) {
        std::vector<Term> args(k, Term::var(""));
        std::function<void(std::size_t)> fill = [&](std::size_t i) {
          if (i == k) {
            by_size[n].push_back(Term::app(op.symbol, args));
            return;
          }
          for (const auto& t : by_size[parts[i]]) {
            args[i] = t;
            fill(i + 1);
          }
        };
        fill(0);
        // next composition: move one unit leftwards from the tail
        if (k == 1) break;
        std::size_t i = k - 1;
        while (i > 0 && parts[i] == 1) --i;
        if (i == 0) break;
        // parts[i] > 1: increment parts[i-1], reset the tail
        std::size_t tail = 0;
        for (std::size_t j = i; j < k; ++j) tail += parts[j];
        ++parts[i - 1];
        --tail;
        for (std::size_t j = i; j < k; ++j) parts[j] = 1;
        parts[k - 1] = tail - (k - 1 - i);
      }
    }
  }
  std::vector<Term> out;
  for (auto& level : by_size) out.insert(out.end(), level.begin(), level.end());
  return out;
}

}  // namespace eqlaw

template <>
struct std::hash<eqlaw::Term> {
  std::size_t operator()(const eqlaw::Term& t) const { return t.hash(); }
};
