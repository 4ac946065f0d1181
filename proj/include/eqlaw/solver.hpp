#pragma once

// Corecursive equations phi: X -> F T X, their operational model on T X
// and finite-horizon checks that quotienting commutes with solving.

#include "eqlaw/behaviour.hpp"
#include "eqlaw/gsos.hpp"
#include "eqlaw/theory.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace eqlaw {

struct CorecSystem {
  std::vector<std::string> variables;
  std::map<std::string, BehaviourStep<Term>> phi;
  DistLaw law;
  TheoryHandle theory;  // may be null

  void validate() const {
    for (const auto& x : variables) {
      auto it = phi.find(x);
      if (it == phi.end()) throw unbound_variable(x);
      check_total(it->second, law.alphabet());
      if (!it->second.output.is_concrete()) throw error("output of '" + x + "' is not concrete");
      for (const auto& [a, t] : it->second.next) check_term(t);
    }
    if (phi.size() != variables.size()) throw error("equations for undeclared variables");
  }

  void check_term(const Term& t) const {
    eqlaw::validate(law.signature(), t);
    for (const auto& v : eqlaw::variables(t))
      if (!phi.count(v)) throw unbound_variable(v);
  }
};

/// phi-hat = F mu . lambda . T phi: one step of the model on T X.
inline BehaviourStep<Term> operational_model(const CorecSystem& sys, const Term& t) {
  sys.check_term(t);
  return extend_lambda(sys.law, t, sys.phi).step;
}

struct Observation {
  Output output;
  Term state;
  std::optional<NormalForm> normal_form;
};

/// Behaviour of `t` at `word`. With a theory and `normalize`, the state is
/// replaced by the representative of its normal form after every step.
inline Observation unfold(const CorecSystem& sys, const Term& t, const Word& word, bool normalize = true) {
  const auto& alphabet = sys.law.alphabet();
  for (const auto& a : word)
    if (std::find(alphabet.begin(), alphabet.end(), a) == alphabet.end())
      throw alphabet_mismatch("letter '" + a + "' is not in the alphabet");
  const Theory* th = normalize ? sys.theory.get() : nullptr;
  Term state = t;
  std::optional<NormalForm> nf;
  auto settle = [&] {
    if (!th) return;
    nf = th->normalize(state);
    state = th->representative(*nf);
  };
  settle();
  for (const auto& a : word) {
    state = operational_model(sys, state).next.at(a);
    settle();
  }
  return {operational_model(sys, state).output, state, nf};
}

/// The first n outputs of a one-letter system.
inline std::vector<Output> stream_prefix(const CorecSystem& sys, const Term& t, std::size_t n, bool normalize = true) {
  const auto& alphabet = sys.law.alphabet();
  if (alphabet.size() != 1) throw alphabet_mismatch("streams need a one-letter alphabet");
  const Theory* th = normalize ? sys.theory.get() : nullptr;
  std::vector<Output> out;
  Term state = t;
  for (std::size_t i = 0; i < n; ++i) {
    if (th) state = th->representative(th->normalize(state));
    auto step = operational_model(sys, state);
    out.push_back(step.output);
    state = step.next.at(alphabet.front());
  }
  return out;
}

inline std::vector<Word> words_upto(const Alphabet& alphabet, std::size_t maxlen) {
  std::vector<Word> out{Word{}};
  for (std::size_t begin = 0; begin < out.size(); ++begin) {
    if (out[begin].size() == maxlen) continue;
    for (const auto& a : alphabet) {
      Word w = out[begin];
      w.push_back(a);
      out.push_back(std::move(w));
    }
  }
  return out;
}

inline std::string word_string(const Word& w) {
  std::string s;
  for (const auto& a : w) s += a;
  return s;
}

struct CommuteViolation {
  std::string term;
  std::string word;
  std::string raw_output;
  std::string quotient_output;
  std::string raw_state;
  std::string quotient_state;
};

struct CommuteReport {
  std::size_t terms = 0;
  std::size_t probes = 0;
  std::vector<CommuteViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Raw unfolding versus unfolding in the quotient, for every enumerated
/// term and every word up to `depth`.
inline CommuteReport quotient_commute_check(const CorecSystem& sys, std::size_t max_size, std::size_t depth,
                                            const std::vector<Index>& index_samples = {}) {
  if (!sys.theory) throw missing_section("quotient-commute needs a theory");
  const Theory& th = *sys.theory;
  const Signature* sig = &sys.law.signature();
  CommuteReport report;
  for (const auto& t : enumerate_terms(sys.law.signature(), sys.variables, max_size, index_samples)) {
    ++report.terms;
    std::function<void(const Term&, const Term&, Word&)> walk = [&](const Term& raw, const Term& quot, Word& w) {
      ++report.probes;
      auto rs = operational_model(sys, raw);
      auto qs = operational_model(sys, quot);
      bool ok = rs.output == qs.output && th.equiv(raw, quot) == Equivalence::equal;
      if (!ok) {
        report.violations.push_back({to_string(t, sig), word_string(w), rs.output.to_string(), qs.output.to_string(),
                                     to_string(raw, sig), to_string(quot, sig)});
        return;
      }
      if (w.size() == depth) return;
      for (const auto& a : sys.law.alphabet()) {
        w.push_back(a);
        walk(rs.next.at(a), th.representative(th.normalize(qs.next.at(a))), w);
        w.pop_back();
      }
    };
    Word w;
    walk(t, th.representative(th.normalize(t)), w);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Induced algebra on truncated behaviours

/// A finite observation of a behaviour: a stream prefix, or the words of
/// length at most the horizon that are accepted.
struct TruncatedBehaviour {
  std::vector<Rational> prefix;
  std::set<Word, ShortLex> language;

  friend bool operator==(const TruncatedBehaviour&, const TruncatedBehaviour&) = default;

  std::string to_string() const {
    std::string out;
    if (!language.empty() || prefix.empty()) {
      out = "{";
      bool first = true;
      for (const auto& w : language) {
        out += (first ? "" : ", ") + (w.empty() ? std::string("eps") : word_string(w));
        first = false;
      }
      return out + "}";
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) out += (i ? ", " : "") + eqlaw::to_string(prefix[i]);
    return "(" + out + ")";
  }
};

inline TruncatedBehaviour observe(const CorecSystem& sys, const Term& t, std::size_t horizon, bool normalize) {
  TruncatedBehaviour b;
  if (sys.law.outputs().kind() == OutputKind::rational) {
    for (const auto& o : stream_prefix(sys, t, horizon, normalize)) {
      auto q = o.as_rational();
      if (!q) throw error("stream output is not concrete");
      b.prefix.push_back(*q);
    }
    return b;
  }
  for (const auto& w : words_upto(sys.law.alphabet(), horizon))
    if (unfold(sys, t, w, normalize).output.as_bool().value_or(false)) b.language.insert(w);
  return b;
}

struct AlgebraReport {
  std::string outer;
  std::size_t horizon = 0;
  TruncatedBehaviour alpha;        // unfold the outer term
  TruncatedBehaviour alpha_prime;  // evaluate its normal form on the leaves
  bool passed() const { return alpha == alpha_prime; }
};

namespace detail {

inline std::vector<Rational> convolve(const std::vector<Rational>& s, const std::vector<Rational>& t) {
  std::vector<Rational> out(s.size(), Rational(0));
  for (std::size_t n = 0; n < s.size(); ++n)
    for (std::size_t i = 0; i <= n; ++i) out[n] += s[i] * t[n - i];
  return out;
}

inline std::set<Word, ShortLex> concat(const std::set<Word, ShortLex>& a, const std::set<Word, ShortLex>& b,
                                       std::size_t horizon) {
  std::set<Word, ShortLex> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      if (x.size() + y.size() > horizon) continue;
      Word xy = x;
      xy.insert(xy.end(), y.begin(), y.end());
      out.insert(std::move(xy));
    }
  return out;
}

}  // namespace detail

/// alpha = alpha' . tau: the behaviour of `outer` equals the induced
/// algebra (convolution polynomial or union/concatenation) applied to the
/// behaviours of its atoms, both truncated at `horizon`.
inline AlgebraReport induced_algebra_check(const CorecSystem& sys, const Term& outer, std::size_t horizon) {
  if (!sys.theory) throw missing_section("algebra-check needs a theory");
  const Theory& th = *sys.theory;
  AlgebraReport report{to_string(outer, &sys.law.signature()), horizon, observe(sys, outer, horizon, false), {}};
  NormalForm nf = th.normalize(outer);
  auto atom = [&](const Term& a) { return observe(sys, a, horizon, false); };
  switch (th.kind()) {
    case TheoryKind::commutative_semiring: {
      std::vector<Rational> sum(horizon, Rational(0));
      for (const auto& [mono, coeff] : nf.polynomial().terms()) {
        if (!coeff.is_constant()) throw error("symbolic coefficient in the outer term");
        std::vector<Rational> prod(horizon, Rational(0));
        if (horizon) prod[0] = 1;
        for (const auto& a : mono) prod = detail::convolve(prod, atom(a).prefix);
        for (std::size_t i = 0; i < horizon; ++i) sum[i] += coeff.constant_term() * prod[i];
      }
      report.alpha_prime.prefix = std::move(sum);
      break;
    }
    case TheoryKind::idempotent_semiring: {
      for (const auto& w : nf.words()) {
        std::set<Word, ShortLex> lang{Word{}};
        for (const auto& a : w) lang = detail::concat(lang, atom(a).language, horizon);
        report.alpha_prime.language.insert(lang.begin(), lang.end());
      }
      break;
    }
    case TheoryKind::generic:
      throw error("the induced algebra is only available for the built-in theories");
  }
  return report;
}

}  // namespace eqlaw
