#include "minisy/cegis.hpp"

#include <chrono>
#include <unordered_set>

#include "minisy/eval.hpp"
#include "minisy/lia.hpp"
#include "minisy/rewriter.hpp"

namespace minisy {

namespace {

using Clock = std::chrono::steady_clock;

Value default_value(const Sort& s) {
  if (s.is_int()) return Value(Integer(0));
  if (s.is_bool()) return Value(false);
  if (s.is_string()) return Value(CodePoints());
  return Value(BitVec(s.bv_width(), 0));
}

/** Replaces every variable bound by `env` with its value as a literal. */
Term plug_point(const Term& t, const Environment& env) {
  std::unordered_map<Term, Term, TermHash> sub;
  for (const auto& [name, val] : env.bindings()) {
    sub.emplace(Term::variable(name, val.sort()), Term::constant(val));
  }
  return substitute(t, sub);
}

}  // namespace

CegisEngine::CegisEngine(const Problem& p, const SynthFun& f,
                         const DatatypeGrammar& g, CegisConfig cfg)
    : d_prob(p),
      d_fun(f),
      d_grammar(g),
      d_cfg(cfg),
      d_verifier(p, cfg.verifier),
      d_enum(g, f.params, EnumeratorConfig{cfg.max_size, cfg.seed}) {}

Term CegisEngine::instantiated(const Term& body) const {
  std::unordered_map<std::string, Term> bodies;
  bodies.emplace(d_fun.name, body);
  return d_verifier.instantiate(bodies);
}

bool CegisEngine::fast_reject(const Term& instantiated_formula) {
  for (const auto& env : d_cexs) {
    try {
      if (!evaluate(instantiated_formula, env).as_bool()) {
        ++d_stats.fast_rejected;
        return true;
      }
    } catch (const EvalError&) {
      return false;
    }
  }
  return false;
}

void CegisEngine::remember_cex(const Environment& env) {
  std::string key = env.str();
  for (const auto& e : d_cexs) {
    if (e.str() == key) return;
  }
  d_cexs.push_back(env);
}

CegisEngine::RepairResult CegisEngine::repair_constants(
    const EmbeddedRef& cand) {
  ++d_stats.repair_attempts;
  std::vector<Term> holes;
  Term tmpl = unembed_with_holes(cand, holes);
  for (const Term& h : holes) {
    if (!h.sort().is_int() && !h.sort().is_bool()) {
      return {RepairResult::Kind::GaveUp, Term()};
    }
  }

  Term formula = instantiated(tmpl);

  std::vector<Environment> points = d_cexs;
  {
    Environment base;
    for (const auto& v : d_prob.universal_vars) {
      base.bind(v.name(), default_value(v.sort()));
    }
    points.push_back(base);
  }

  for (int round = 0; round < 20; ++round) {
    std::vector<Term> conjuncts;
    conjuncts.reserve(points.size());
    for (const auto& pt : points) conjuncts.push_back(plug_point(formula, pt));
    Term query = conjuncts.size() == 1 ? conjuncts[0]
                                       : Term::apply(Op::And, conjuncts);
    LiaResult r = qf_lia_sat(query);
    if (r.unsat()) return {RepairResult::Kind::ExactNoSolution, Term()};
    if (!r.sat()) return {RepairResult::Kind::GaveUp, Term()};

    std::vector<Value> vals;
    vals.reserve(holes.size());
    for (const Term& h : holes) {
      const Value* v = r.model.lookup(h.name());
      vals.push_back(v ? *v : default_value(h.sort()));
    }
    Term body = unembed(fill_holes(cand, vals));

    ++d_stats.verifier_calls;
    std::unordered_map<std::string, Term> bodies;
    bodies.emplace(d_fun.name, body);
    VerifyResult res = d_verifier.check(bodies);
    if (res.valid()) return {RepairResult::Kind::Solved, body};
    if (!res.refuted()) return {RepairResult::Kind::GaveUp, Term()};
    remember_cex(res.counterexample);
    points.push_back(res.counterexample);
  }
  return {RepairResult::Kind::GaveUp, Term()};
}

SolveOutcome CegisEngine::solve() {
  auto deadline = Clock::now() + std::chrono::milliseconds(d_cfg.timeout_ms);

  while (true) {
    if (Clock::now() >= deadline) {
      d_stats.enumeration = d_enum.stats();
      return SolveOutcome::unknown("timeout");
    }

    auto opt = d_enum.next();
    if (!opt) {
      d_stats.enumeration = d_enum.stats();
      if (d_enum.exhausted_completely() && d_all_rejections_exact) {
        return SolveOutcome::infeasible();
      }
      if (d_enum.stopped_at_size_cap()) {
        return SolveOutcome::unknown("term size cap reached");
      }
      return SolveOutcome::unknown("search inconclusive");
    }
    if (++d_stats.candidates > d_cfg.max_candidates) {
      d_stats.enumeration = d_enum.stats();
      return SolveOutcome::unknown("candidate budget exhausted");
    }

    const EmbeddedRef& cand = *opt;
    if (has_holes(cand)) {
      RepairResult r = repair_constants(cand);
      if (r.kind == RepairResult::Kind::Solved) {
        d_stats.enumeration = d_enum.stats();
        return SolveOutcome::solution(r.body);
      }
      if (r.kind == RepairResult::Kind::GaveUp) {
        d_all_rejections_exact = false;
      }
      continue;
    }

    Term body = unembed(cand);
    Term formula = instantiated(body);
    if (fast_reject(formula)) continue;

    ++d_stats.verifier_calls;
    std::unordered_map<std::string, Term> bodies;
    bodies.emplace(d_fun.name, body);
    VerifyResult res = d_verifier.check(bodies);
    if (res.valid()) {
      d_stats.enumeration = d_enum.stats();
      return SolveOutcome::solution(body);
    }
    if (res.refuted()) {
      remember_cex(res.counterexample);
    } else {
      d_all_rejections_exact = false;
    }
  }
}

}  // namespace minisy
