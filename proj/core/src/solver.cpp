#include "minisy/solver.hpp"

#include <chrono>
#include <stdexcept>

#include "minisy/invariant.hpp"
#include "minisy/pbe.hpp"
#include "minisy/single_invocation.hpp"

namespace minisy {

namespace {

using Clock = std::chrono::steady_clock;

int64_t remaining_ms(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                  deadline - Clock::now())
                  .count();
  return left > 0 ? left : 1;
}

}  // namespace

Strategy strategy_from_name(const std::string& name) {
  if (name == "auto") return Strategy::Auto;
  if (name == "fast") return Strategy::Fast;
  if (name == "si") return Strategy::Si;
  if (name == "pbe") return Strategy::Pbe;
  if (name == "unif") return Strategy::Unif;
  throw std::invalid_argument("unknown strategy: " + name);
}

Solver::Solver(const Problem& p, SolverConfig cfg) : d_prob(p), d_cfg(cfg) {}

SolveReport Solver::solve() {
  SolveReport report;
  report.warnings = d_prob.warnings;

  if (d_prob.functions.size() != 1) {
    report.outcome =
        SolveOutcome::unknown("exactly one synthesis target is supported");
    return report;
  }
  const SynthFun& f = d_prob.functions[0];
  report.function_name = f.name;

  DatatypeGrammar grammar =
      f.grammar ? DatatypeGrammar::embed(*f.grammar, f.params)
                : DatatypeGrammar::default_for(f.params, f.ret,
                                               literal_pool(d_prob));

  VerifierConfig vcfg;
  vcfg.int_bound = d_cfg.verify_bound;

  auto deadline = Clock::now() + std::chrono::milliseconds(d_cfg.timeout_ms);

  auto run_cegis = [&](int64_t budget_ms) {
    CegisConfig cfg;
    cfg.timeout_ms = budget_ms;
    cfg.max_size = d_cfg.max_size;
    cfg.seed = d_cfg.seed;
    cfg.verifier = vcfg;
    CegisEngine engine(d_prob, f, grammar, cfg);
    SolveOutcome out = engine.solve();
    report.stats.strategy = "enumerative";
    report.stats.enumerated = engine.stats().enumeration.built;
    report.stats.admitted = engine.stats().enumeration.admitted;
    report.stats.verifier_calls = engine.stats().verifier_calls;
    return out;
  };

  auto run_pbe = [&](int64_t budget_ms) {
    PbeConfig cfg;
    cfg.timeout_ms = budget_ms;
    cfg.max_size = d_cfg.max_size > 16 ? d_cfg.max_size : 16;
    cfg.seed = d_cfg.seed;
    cfg.verifier = vcfg;
    PbeEngine engine(d_prob, f, grammar, cfg);
    SolveOutcome out = engine.solve();
    report.stats.strategy = "examples";
    report.stats.admitted = engine.stats().terms;
    report.stats.rounds = engine.stats().rounds;
    return out;
  };

  auto run_si = [&]() {
    SiConfig cfg;
    cfg.seed = d_cfg.seed;
    cfg.verifier = vcfg;
    SingleInvocationEngine engine(d_prob, f, grammar, cfg);
    SolveOutcome out = engine.solve();
    report.stats.strategy = "instantiation";
    report.stats.rounds = engine.stats().rounds;
    return out;
  };

  auto run_unif = [&](int64_t budget_ms) {
    InvariantConfig cfg;
    cfg.timeout_ms = budget_ms;
    cfg.max_size = d_cfg.max_size;
    cfg.seed = d_cfg.seed;
    cfg.verifier = vcfg;
    InvariantEngine engine(d_prob, f, grammar, cfg);
    SolveOutcome out = engine.solve();
    report.stats.strategy = "unification";
    report.stats.rounds = engine.stats().rounds;
    return out;
  };

  switch (d_cfg.strategy) {
    case Strategy::Fast:
      report.outcome = run_cegis(remaining_ms(deadline));
      return report;

    case Strategy::Si: {
      SolveOutcome out = run_si();
      if (out.kind == SolveOutcome::Kind::Unknown) {
        report.warnings.push_back(
            "instantiation strategy gave up (" + out.reason +
            "); falling back to enumerative search");
        out = run_cegis(remaining_ms(deadline));
      }
      report.outcome = out;
      return report;
    }

    case Strategy::Pbe: {
      if (!extract_pbe(d_prob, f)) {
        report.warnings.push_back(
            "problem is not example-shaped; using enumerative search");
        report.outcome = run_cegis(remaining_ms(deadline));
        return report;
      }
      SolveOutcome out = run_pbe(remaining_ms(deadline));
      if (out.kind == SolveOutcome::Kind::Unknown) {
        out = run_cegis(remaining_ms(deadline));
      }
      report.outcome = out;
      return report;
    }

    case Strategy::Unif: {
      if (!d_prob.is_invariant) {
        report.warnings.push_back(
            "problem has no inv-constraint; using enumerative search");
        report.outcome = run_cegis(remaining_ms(deadline));
        return report;
      }
      report.outcome = run_unif(remaining_ms(deadline));
      return report;
    }

    case Strategy::Auto:
      break;
  }

  if (d_prob.is_invariant) {
    SolveOutcome out = run_cegis(d_cfg.timeout_ms / 2);
    if (out.kind == SolveOutcome::Kind::Unknown) {
      out = run_unif(remaining_ms(deadline));
    }
    report.outcome = out;
    return report;
  }

  if (!d_prob.constraints.empty() && extract_pbe(d_prob, f)) {
    SolveOutcome out = run_pbe(remaining_ms(deadline));
    if (out.kind == SolveOutcome::Kind::Unknown) {
      out = run_cegis(remaining_ms(deadline));
    }
    report.outcome = out;
    return report;
  }

  if (detect_single_invocation(d_prob, f)) {
    SolveOutcome out = run_si();
    if (out.kind != SolveOutcome::Kind::Unknown) {
      report.outcome = out;
      return report;
    }
  }

  report.outcome = run_cegis(remaining_ms(deadline));
  return report;
}

}  // namespace minisy
