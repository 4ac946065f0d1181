// Command-line front end. Exit codes: 0 holds/pass, 1 fails/counterexample,
// 2 unknown, 3 usage or load error.

#include "eqlaw/eqlaw.hpp"
#include "eqlaw/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using namespace eqlaw;

constexpr int kUsage = 3;

struct Options {
  std::string file;
  bool json = false;
  bool trace = false;
  std::string state;
  std::string word;
  std::string left;
  std::string right;
  std::string outer;
  std::size_t n = 10;
  std::size_t maxlen = 6;
  std::size_t max_size = 4;
  std::size_t depth = 4;
  std::size_t horizon = 5;
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return 0;
    case Verdict::fails:
      return 1;
    case Verdict::unknown:
      return 2;
  }
  return kUsage;
}

std::vector<Index> index_samples(const Signature& sig) {
  if (!sig.bracket_family()) return {};
  return {scalar(0), scalar(1), scalar(2), scalar(Rational(1, 2))};
}

int check_preservation_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const DistLaw& law = wb.require_law();
  const Signature* sig = &law.signature();
  PreservationReport r = check_preservation(*wb.theory, law);
  if (o.json) {
    std::cout << to_json(r, sig, o.trace).dump(2) << "\n";
    return exit_code(r.verdict);
  }
  for (const auto& s : r.schemes) {
    std::cout << s.scheme << ": " << to_string(s.verdict) << "\n";
    for (const auto& c : s.cases) {
      if (c.verdict == Verdict::holds && !o.trace) continue;
      std::cout << "  " << (c.branch.empty() ? "case" : c.branch) << ": " << to_string(c.verdict);
      if (!c.failing_position.empty()) std::cout << " at " << c.failing_position;
      std::cout << "\n    " << to_string(c.lhs, sig) << "  =  " << to_string(c.rhs, sig) << "\n";
      std::cout << "    lambda(lhs) = " << step_string(c.lhs_step, sig) << "\n";
      std::cout << "    lambda(rhs) = " << step_string(c.rhs_step, sig) << "\n";
      for (const auto& l : c.letters)
        std::cout << "    " << l.letter << ": " << l.lhs_normal << " vs " << l.rhs_normal << " -> " << to_string(l.equiv) << "\n";
    }
  }
  std::cout << "verdict: " << to_string(r.verdict) << "\n";
  return exit_code(r.verdict);
}

int run_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const CorecSystem& sys = wb.require_system();
  Term t = parse_term(o.state, sys.law.signature());
  Observation obs = unfold(sys, t, parse_word(o.word, sys.law.alphabet()));
  const Signature* sig = &sys.law.signature();
  if (o.json) {
    json j{{"command", "run"}, {"verdict", "pass"}, {"output", obs.output.to_string()}, {"state", to_string(obs.state, sig)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "output: " << obs.output.to_string() << "\nstate: " << to_string(obs.state, sig) << "\n";
  }
  return 0;
}

int stream_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const CorecSystem& sys = wb.require_system();
  auto prefix = stream_prefix(sys, parse_term(o.state, sys.law.signature()), o.n);
  json values = json::array();
  std::string line;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    values.push_back(prefix[i].to_string());
    line += (i ? ", " : "") + prefix[i].to_string();
  }
  if (o.json) std::cout << json{{"command", "stream"}, {"verdict", "pass"}, {"values", values}}.dump(2) << "\n";
  else std::cout << line << "\n";
  return 0;
}

int cfg_member_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const GnfGrammar& g = wb.require_grammar();
  bool in = member(wb.require_system(), g.start, parse_word(o.word, g.alphabet));
  if (o.json)
    std::cout << json{{"command", "cfg-member"}, {"verdict", "pass"}, {"word", o.word}, {"member", in}}.dump(2) << "\n";
  else
    std::cout << (in ? 1 : 0) << "\n";
  return 0;
}

int cfg_equiv_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const GnfGrammar& g = wb.require_grammar();
  const CorecSystem& sys = wb.require_system();
  const Signature& sig = sys.law.signature();
  Term l = o.left.empty() ? g.start : parse_term(o.left, sig);
  Term r = parse_term(o.right, sig);
  EquivResult res = equiv_upto(sys, l, r, o.maxlen);
  std::string cex = res.counterexample ? word_string(*res.counterexample) : "";
  if (o.json) {
    json j{{"command", "cfg-equiv"}, {"verdict", res.equivalent ? "pass" : "fail"}, {"maxlen", o.maxlen}};
    if (res.counterexample) j["counterexample"] = cex;
    std::cout << j.dump(2) << "\n";
  } else if (res.equivalent) {
    std::cout << "equivalent up to length " << o.maxlen << "\n";
  } else {
    std::cout << "counterexample: \"" << cex << "\"\n";
  }
  return res.equivalent ? 0 : 1;
}

int quotient_commute_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const CorecSystem& sys = wb.require_system();
  if (!sys.theory) throw missing_section("no theory block");
  const Signature& sig = sys.law.signature();
  auto samples = index_samples(sig);
  SquareReport square = morphism_square_check(*sys.theory, sys.law, square_samples(sys.law, {"x", "y"}, o.max_size, samples));
  CommuteReport commute = quotient_commute_check(sys, o.max_size, o.depth, samples);
  bool ok = square.passed() && commute.passed();
  if (o.json) {
    json j{{"command", "quotient-commute"},
           {"verdict", ok ? "pass" : "fail"},
           {"square", to_json(square)},
           {"commute", to_json(commute)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "square: " << square.checked << " samples, " << square.failures.size() << " failures\n";
    for (const auto& f : square.failures)
      std::cout << "  " << f.term << " via " << f.representative << ": " << f.via_lambda << " vs " << f.via_quotient << "\n";
    std::cout << "commute: " << commute.terms << " terms, " << commute.probes << " probes, " << commute.violations.size()
              << " violations\n";
    for (const auto& v : commute.violations)
      std::cout << "  " << v.term << " at \"" << v.word << "\": " << v.raw_output << " vs " << v.quotient_output << "\n";
  }
  return ok ? 0 : 1;
}

int algebra_check_cmd(const Options& o) {
  Workbench wb = load(o.file);
  const CorecSystem& sys = wb.require_system();
  AlgebraReport r = induced_algebra_check(sys, parse_term(o.outer, sys.law.signature()), o.horizon);
  if (o.json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << "alpha:  " << r.alpha.to_string() << "\nalpha': " << r.alpha_prime.to_string() << "\n"
              << (r.passed() ? "pass" : "fail") << "\n";
  }
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eqlaw: equational theories, distributive laws and coinductive solvers"};
  app.require_subcommand(1);
  Options o;
  int (*command)(const Options&) = nullptr;

  auto common = [&](CLI::App* sub, int (*fn)(const Options&)) {
    sub->add_option("file", o.file, "workbench file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", o.json, "machine-readable report");
    sub->add_flag("--trace", o.trace, "include intermediate steps");
    sub->callback([&command, fn] { command = fn; });
    return sub;
  };

  common(app.add_subcommand("check-preservation", "check that the rules preserve the equations"), check_preservation_cmd);
  auto* run = common(app.add_subcommand("run", "unfold a state along a word"), run_cmd);
  run->add_option("--state", o.state, "term over the system variables")->required();
  run->add_option("--word", o.word, "letters");
  auto* stream = common(app.add_subcommand("stream", "print a stream prefix"), stream_cmd);
  stream->add_option("--state", o.state)->required();
  stream->add_option("--n", o.n, "number of elements");

  auto member_opts = [&](CLI::App* sub) { sub->add_option("--word", o.word, "letters"); };
  auto equiv_opts = [&](CLI::App* sub) {
    sub->add_option("--left", o.left, "first term (default: start)");
    sub->add_option("--right", o.right, "second term")->required();
    sub->add_option("--maxlen", o.maxlen, "word length bound");
  };
  member_opts(common(app.add_subcommand("cfg-member", "grammar membership"), cfg_member_cmd));
  equiv_opts(common(app.add_subcommand("cfg-equiv", "bounded equivalence"), cfg_equiv_cmd));
  auto* cfg = app.add_subcommand("cfg", "grammar commands");
  cfg->require_subcommand(1);
  member_opts(common(cfg->add_subcommand("member", "grammar membership"), cfg_member_cmd));
  equiv_opts(common(cfg->add_subcommand("equiv", "bounded equivalence"), cfg_equiv_cmd));

  auto* qc = common(app.add_subcommand("quotient-commute", "solve-then-quotient versus quotient-then-solve"),
                    quotient_commute_cmd);
  qc->add_option("--max-size", o.max_size, "term size bound");
  qc->add_option("--depth", o.depth, "word length bound");
  auto* alg = common(app.add_subcommand("algebra-check", "induced algebra on truncated behaviours"), algebra_check_cmd);
  alg->add_option("--outer", o.outer, "outer term over the system variables")->required();
  alg->add_option("--horizon", o.horizon, "observation horizon")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  try {
    return command ? command(o) : kUsage;
  } catch (const eqlaw::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
