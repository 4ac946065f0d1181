#pragma once

// JSON renderings of the check reports (schemas/report.schema.json).

#include "eqlaw/cfg.hpp"
#include "eqlaw/gsos.hpp"
#include "eqlaw/preservation.hpp"
#include "eqlaw/solver.hpp"

#include <json.hpp>

namespace eqlaw {

using json = nlohmann::ordered_json;

inline json step_json(const BehaviourStep<Term>& s, const Signature* sig) {
  json next = json::object();
  for (const auto& [a, t] : s.next) next[a] = to_string(t, sig);
  return {{"output", s.output.to_string()}, {"next", next}};
}

inline json to_json(const CaseReport& c, const Signature* sig, bool trace) {
  json j{{"branch", c.branch}, {"verdict", to_string(c.verdict)}, {"lhs", to_string(c.lhs, sig)}, {"rhs", to_string(c.rhs, sig)}};
  if (c.verdict != Verdict::holds) {
    j["failing_position"] = c.failing_position;
    j["witness"] = {{"lhs_step", step_json(c.lhs_step, sig)}, {"rhs_step", step_json(c.rhs_step, sig)}};
  }
  json letters = json::array();
  for (const auto& l : c.letters) {
    json lj{{"letter", l.letter}, {"lhs_next", l.lhs_next}, {"rhs_next", l.rhs_next}, {"equiv", to_string(l.equiv)}};
    if (trace) {
      lj["lhs_normal"] = l.lhs_normal;
      lj["rhs_normal"] = l.rhs_normal;
    }
    letters.push_back(std::move(lj));
  }
  j["letters"] = std::move(letters);
  if (trace) {
    json leaves = json::object();
    for (const auto& [x, s] : c.leaves) leaves[x] = step_json(s, sig);
    j["trace"] = {{"leaves", leaves},
                  {"lhs_step", step_json(c.lhs_step, sig)},
                  {"rhs_step", step_json(c.rhs_step, sig)},
                  {"outputs_equal", c.outputs_equal}};
  }
  return j;
}

inline json to_json(const PreservationReport& r, const Signature* sig, bool trace) {
  json schemes = json::array();
  for (const auto& s : r.schemes) {
    json cases = json::array();
    for (const auto& c : s.cases) cases.push_back(to_json(c, sig, trace));
    schemes.push_back({{"scheme", s.scheme}, {"verdict", to_string(s.verdict)}, {"cases", cases}});
  }
  return {{"command", "check-preservation"}, {"verdict", to_string(r.verdict)}, {"schemes", schemes}};
}

inline json to_json(const SquareReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back(
        {{"term", f.term}, {"representative", f.representative}, {"via_lambda", f.via_lambda}, {"via_quotient", f.via_quotient}});
  return {{"checked", r.checked}, {"failures", failures}};
}

inline json to_json(const CommuteReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"term", v.term},
                          {"word", v.word},
                          {"raw_output", v.raw_output},
                          {"quotient_output", v.quotient_output},
                          {"raw_state", v.raw_state},
                          {"quotient_state", v.quotient_state}});
  return {{"terms", r.terms}, {"probes", r.probes}, {"violations", violations}};
}

inline json to_json(const AlgebraReport& r) {
  return {{"command", "algebra-check"},
          {"verdict", r.passed() ? "pass" : "fail"},
          {"outer", r.outer},
          {"horizon", r.horizon},
          {"alpha", r.alpha.to_string()},
          {"alpha_prime", r.alpha_prime.to_string()}};
}

}  // namespace eqlaw
