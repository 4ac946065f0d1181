#pragma once

// Does lambda preserve the equations? Each scheme is checked once on a
// generic instance built from pairwise distinct fresh tokens. By
// naturality every concrete instance is a renaming of it.

#include "eqlaw/behaviour.hpp"
#include "eqlaw/gsos.hpp"
#include "eqlaw/theory.hpp"

#include <map>
#include <string>
#include <vector>

namespace eqlaw {

enum class Verdict { holds, fails, unknown };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::unknown:
      return "unknown";
  }
  return {};
}

/// Fails dominates Unknown dominates Holds.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fails || b == Verdict::fails) return Verdict::fails;
  if (a == Verdict::unknown || b == Verdict::unknown) return Verdict::unknown;
  return Verdict::holds;
}

/// Fresh tokens for one metavariable.
struct GenericLeaf {
  std::string leaf;
  std::string out;
  std::map<Letter, std::string> derivs;

  friend bool operator==(const GenericLeaf&, const GenericLeaf&) = default;
};

using GenericInstance = std::map<std::string, GenericLeaf>;

inline GenericInstance generic_instance(const EquationScheme& scheme, const Alphabet& alphabet) {
  GenericInstance out;
  for (const auto& v : scheme.metavars) {
    GenericLeaf g{"x_" + v, "b_" + v, {}};
    for (const auto& a : alphabet) g.derivs.emplace(a, alphabet.size() == 1 ? "d_" + v : "d_" + v + "_" + a);
    out.emplace(v, std::move(g));
  }
  return out;
}

struct LetterCheck {
  Letter letter;
  std::string lhs_next;
  std::string rhs_next;
  std::string lhs_normal;
  std::string rhs_normal;
  Equivalence equiv = Equivalence::equal;
};

/// One scheme under one assignment of Boolean output tokens.
struct CaseReport {
  std::string scheme;
  std::string branch;  // "b_u=0,b_v=1"; empty for symbolic outputs
  Verdict verdict = Verdict::holds;
  Term lhs = Term::var("");
  Term rhs = Term::var("");
  Leaves leaves;
  BehaviourStep<Term> lhs_step;
  BehaviourStep<Term> rhs_step;
  bool outputs_equal = true;
  std::vector<LetterCheck> letters;
  std::string failing_position;  // "output" or "next(a)"
};

struct SchemeReport {
  std::string scheme;
  Verdict verdict = Verdict::holds;
  std::vector<CaseReport> cases;
};

struct PreservationReport {
  Verdict verdict = Verdict::holds;
  std::vector<SchemeReport> schemes;

  const SchemeReport* find(const std::string& name) const {
    for (const auto& s : schemes)
      if (s.scheme == name) return &s;
    return nullptr;
  }
};

namespace detail {

inline CaseReport check_case(const Theory& th, const DistLaw& law, const EquationScheme& scheme,
                             const GenericInstance& gi, const std::map<std::string, Output>& outs, std::string branch) {
  CaseReport c;
  c.scheme = scheme.name;
  c.branch = std::move(branch);
  Substitution assignment;
  for (const auto& [v, g] : gi) {
    assignment.emplace(v, Term::var(g.leaf));
    BehaviourStep<Term> s{outs.at(v), {}};
    for (const auto& [a, d] : g.derivs) s.next.emplace(a, Term::var(d));
    c.leaves.emplace(g.leaf, std::move(s));
  }
  std::tie(c.lhs, c.rhs) = instantiate_scheme(scheme, assignment);
  c.lhs_step = extend_lambda(law, c.lhs, c.leaves).step;
  c.rhs_step = extend_lambda(law, c.rhs, c.leaves).step;

  const Signature* sig = &law.signature();
  c.outputs_equal = c.lhs_step.output == c.rhs_step.output;
  if (!c.outputs_equal) {
    c.verdict = Verdict::fails;
    c.failing_position = "output";
  }
  for (const auto& a : law.alphabet()) {
    const Term& l = c.lhs_step.next.at(a);
    const Term& r = c.rhs_step.next.at(a);
    LetterCheck lc{a, to_string(l, sig), to_string(r, sig), th.normalize(l).to_string(sig), th.normalize(r).to_string(sig),
                   th.equiv(l, r)};
    if (lc.equiv == Equivalence::distinct) {
      if (c.failing_position.empty()) c.failing_position = "next(" + a + ")";
      c.verdict = Verdict::fails;
    } else if (lc.equiv == Equivalence::unknown) {
      c.verdict = combine(c.verdict, Verdict::unknown);
    }
    c.letters.push_back(std::move(lc));
  }
  return c;
}

}  // namespace detail

/// Schemes in declaration order; Boolean branches in binary order with
/// the first metavariable most significant.
inline PreservationReport check_preservation(const Theory& th, const DistLaw& law) {
  PreservationReport report;
  const auto& algebra = law.outputs();
  for (const auto& scheme : th.schemes()) {
    SchemeReport sr{scheme.name, Verdict::holds, {}};
    GenericInstance gi = generic_instance(scheme, law.alphabet());
    const auto& vars = scheme.metavars;
    if (algebra.kind() == OutputKind::rational) {
      std::map<std::string, Output> outs;
      for (const auto& v : vars) outs.emplace(v, algebra.token(gi.at(v).out));
      sr.cases.push_back(detail::check_case(th, law, scheme, gi, outs, ""));
    } else {
      for (std::size_t bits = 0; bits < (std::size_t{1} << vars.size()); ++bits) {
        std::map<std::string, Output> outs;
        std::string branch;
        for (std::size_t i = 0; i < vars.size(); ++i) {
          bool b = ((bits >> (vars.size() - 1 - i)) & 1) != 0;
          outs.emplace(vars[i], Output::boolean(b));
          branch += (i ? "," : "") + gi.at(vars[i]).out + "=" + (b ? "1" : "0");
        }
        sr.cases.push_back(detail::check_case(th, law, scheme, gi, outs, branch));
      }
    }
    for (const auto& c : sr.cases) sr.verdict = combine(sr.verdict, c.verdict);
    report.verdict = combine(report.verdict, sr.verdict);
    report.schemes.push_back(std::move(sr));
  }
  return report;
}

/// Re-runs a case from its stored instance: true iff it still fails.
inline bool replay_fails(const Theory& th, const DistLaw& law, const CaseReport& c) {
  auto l = extend_lambda(law, c.lhs, c.leaves).step;
  auto r = extend_lambda(law, c.rhs, c.leaves).step;
  return !relation_lift([&](const Term& x, const Term& y) { return th.equiv(x, y) != Equivalence::distinct; }, l, r);
}

}  // namespace eqlaw
