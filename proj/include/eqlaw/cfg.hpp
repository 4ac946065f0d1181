#pragma once

// Grammars in Greibach normal form as coalgebras X -> 2 x P(X*)^A.

#include "eqlaw/gsos.hpp"
#include "eqlaw/solver.hpp"
#include "eqlaw/theory.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace eqlaw {

using SymbolWord = std::vector<std::string>;
using Productions = std::set<SymbolWord, ShortLex>;

struct GnfGrammar {
  std::vector<std::string> nonterminals;
  Alphabet alphabet;
  std::map<std::string, bool> empty;
  std::map<std::string, std::map<Letter, Productions>> prods;
  Term start = Term::var("");

  const Productions& productions(const std::string& x, const Letter& a) const {
    static const Productions none;
    auto it = prods.find(x);
    if (it == prods.end()) return none;
    auto jt = it->second.find(a);
    return jt == it->second.end() ? none : jt->second;
  }

  bool nullable(const std::string& x) const {
    auto it = empty.find(x);
    return it != empty.end() && it->second;
  }

  void validate() const {
    std::set<std::string> xs(nonterminals.begin(), nonterminals.end());
    if (xs.size() != nonterminals.size()) throw invalid_grammar("nonterminal declared twice");
    std::set<Letter> as(alphabet.begin(), alphabet.end());
    if (alphabet.empty() || as.size() != alphabet.size()) throw invalid_grammar("bad alphabet");
    for (const auto& [x, b] : empty)
      if (!xs.count(x)) throw invalid_grammar("undeclared nonterminal '" + x + "'");
    for (const auto& [x, per] : prods) {
      if (!xs.count(x)) throw invalid_grammar("undeclared nonterminal '" + x + "'");
      for (const auto& [a, ws] : per) {
        if (!as.count(a)) throw invalid_grammar("letter '" + a + "' is not in the alphabet");
        for (const auto& w : ws)
          for (const auto& y : w)
            if (!xs.count(y)) throw invalid_grammar("undeclared nonterminal '" + y + "' in a production");
      }
    }
    for (const auto& v : variables(start))
      if (!xs.count(v)) throw invalid_grammar("start uses undeclared nonterminal '" + v + "'");
  }
};

/// The signature 0, 1, + and . of context-free expressions.
inline Signature cfg_signature() {
  Signature sig;
  sig.add_op("0", 0);
  sig.add_op("1", 0);
  sig.add_op("+", 2, 10);
  sig.add_op(".", 2, 20);
  return sig;
}

/// The rule table for context-free expressions: sums take the maximum,
/// products branch on whether the first factor accepts the empty word.
inline DistLaw cfg_law(const Alphabet& alphabet) {
  GsosSpec spec{RuleFormat::gsos, {}};
  auto var = [](const char* n) { return Term::var(n); };
  ArgPattern px{"x", "ox", "dx"}, py{"y", "oy", "dy"};
  spec.rules.push_back({"0", false, "", {}, OutputExpr::constant(0), NextExpr::of(Term::app("0"))});
  spec.rules.push_back({"1", false, "", {}, OutputExpr::constant(1), NextExpr::of(Term::app("0"))});
  spec.rules.push_back({"+", false, "", {px, py},
                        OutputExpr::apply("max", {OutputExpr::token("ox"), OutputExpr::token("oy")}),
                        NextExpr::of(Term::app("+", {var("dx"), var("dy")}))});
  Term dxy = Term::app(".", {var("dx"), var("y")});
  spec.rules.push_back({".", false, "", {px, py},
                        OutputExpr::apply("min", {OutputExpr::token("ox"), OutputExpr::token("oy")}),
                        NextExpr::split("ox", NextExpr::of(dxy), NextExpr::of(Term::app("+", {dxy, var("dy")})))});
  return DistLaw(cfg_signature(), alphabet, OutputAlgebra::booleans(), std::move(spec));
}

namespace detail {

inline Term product_term(const SymbolWord& w) {
  if (w.empty()) return Term::app("1");
  Term acc = Term::var(w.back());
  for (std::size_t i = w.size() - 1; i-- > 0;) acc = Term::app(".", {Term::var(w[i]), acc});
  return acc;
}

inline Term sum_term(const Productions& ws) {
  if (ws.empty()) return Term::app("0");
  std::vector<Term> summands;
  for (const auto& w : ws) summands.push_back(product_term(w));
  Term acc = summands.back();
  for (std::size_t i = summands.size() - 1; i-- > 0;) acc = Term::app("+", {summands[i], acc});
  return acc;
}

}  // namespace detail

/// phi(x) = <o(x), a -> sum of the products of t(x)(a)>, right-nested with
/// summands in shortlex order.
inline CorecSystem to_corec(const GnfGrammar& g, std::optional<DistLaw> law = std::nullopt, TheoryHandle theory = nullptr) {
  g.validate();
  if (!law) law = cfg_law(g.alphabet);
  if (law->alphabet() != g.alphabet) throw alphabet_mismatch("grammar and rules use different alphabets");
  if (!theory) theory = idempotent_semiring(law->signature(), {"+", ".", "", "0", "1"});
  CorecSystem sys{g.nonterminals, {}, *law, theory};
  for (const auto& x : g.nonterminals) {
    BehaviourStep<Term> step{Output::boolean(g.nullable(x)), {}};
    for (const auto& a : g.alphabet) step.next.emplace(a, detail::sum_term(g.productions(x, a)));
    sys.phi.emplace(x, std::move(step));
  }
  sys.validate();
  return sys;
}

/// Membership by unfolding in the quotient (finite languages over X).
inline bool member(const CorecSystem& sys, const Term& start, const Word& w) {
  auto b = unfold(sys, start, w, true).output.as_bool();
  if (!b) throw error("membership output is not concrete");
  return *b;
}

inline bool member(const GnfGrammar& g, const Word& w) { return member(to_corec(g), g.start, w); }

/// Language derivatives on sets of nonterminal words, without the rule
/// table: d_a(X1...Xn) is the union over nullable prefixes X1..X(i-1) of
/// t(Xi)(a) X(i+1)...Xn.
inline bool member_direct(const GnfGrammar& g, const Word& w) {
  std::set<SymbolWord, ShortLex> state;
  std::function<std::set<SymbolWord, ShortLex>(const Term&)> words = [&](const Term& t) -> std::set<SymbolWord, ShortLex> {
    if (t.is_var()) return {SymbolWord{t.name()}};
    if (t.name() == "0") return {};
    if (t.name() == "1") return {SymbolWord{}};
    auto l = words(t.args()[0]), r = words(t.args()[1]);
    if (t.name() == "+") {
      l.insert(r.begin(), r.end());
      return l;
    }
    std::set<SymbolWord, ShortLex> out;
    for (const auto& x : l)
      for (const auto& y : r) {
        SymbolWord xy = x;
        xy.insert(xy.end(), y.begin(), y.end());
        out.insert(std::move(xy));
      }
    return out;
  };
  state = words(g.start);
  for (const auto& a : w) {
    std::set<SymbolWord, ShortLex> next;
    for (const auto& word : state)
      for (std::size_t i = 0; i < word.size(); ++i) {
        for (const auto& p : g.productions(word[i], a)) {
          SymbolWord nw = p;
          nw.insert(nw.end(), word.begin() + static_cast<std::ptrdiff_t>(i) + 1, word.end());
          next.insert(std::move(nw));
        }
        if (!g.nullable(word[i])) break;
      }
    state = std::move(next);
  }
  for (const auto& word : state)
    if (std::all_of(word.begin(), word.end(), [&](const std::string& x) { return g.nullable(x); })) return true;
  return false;
}

struct EquivResult {
  bool equivalent = true;
  std::optional<Word> counterexample;
  std::size_t pairs_explored = 0;
};

/// Joint breadth-first unfolding up to `maxlen`, memoized on pairs of
/// normal forms. Returns the shortlex-least distinguishing word.
inline EquivResult equiv_upto(const CorecSystem& sys, const Term& t1, const Term& t2, std::size_t maxlen) {
  if (!sys.theory) throw missing_section("equivalence needs a theory");
  const Theory& th = *sys.theory;
  auto step = [&](const NormalForm& nf) { return normalize_step(th, operational_model(sys, th.representative(nf))); };
  struct Item {
    NormalForm a, b;
    Word w;
  };
  EquivResult result;
  std::set<std::pair<NormalForm, NormalForm>> seen;
  std::deque<Item> queue;
  queue.push_back({th.normalize(t1), th.normalize(t2), {}});
  seen.emplace(queue.front().a, queue.front().b);
  while (!queue.empty()) {
    Item it = std::move(queue.front());
    queue.pop_front();
    ++result.pairs_explored;
    auto sa = step(it.a), sb = step(it.b);
    if (!(sa.output == sb.output)) {
      result.equivalent = false;
      result.counterexample = it.w;
      return result;
    }
    if (it.w.size() == maxlen) continue;
    for (const auto& a : sys.law.alphabet()) {
      auto key = std::make_pair(sa.next.at(a), sb.next.at(a));
      if (!seen.insert(key).second) continue;
      Word w = it.w;
      w.push_back(a);
      queue.push_back({key.first, key.second, std::move(w)});
    }
  }
  return result;
}

inline EquivResult equiv_upto(const GnfGrammar& g, const Term& t1, const Term& t2, std::size_t maxlen) {
  return equiv_upto(to_corec(g), t1, t2, maxlen);
}

}  // namespace eqlaw
