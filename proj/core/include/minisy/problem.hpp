#ifndef MINISY_PROBLEM_HPP
#define MINISY_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "minisy/grammar.hpp"
#include "minisy/term.hpp"

namespace minisy {

/** A function to synthesize: signature plus optional syntactic grammar. */
struct SynthFun {
  std::string name;
  std::vector<Term> params;  // canonical parameter variables, in order
  Sort ret;
  std::optional<GrammarSpec> grammar;
  bool is_inv = false;

  SynthFun(std::string n, std::vector<Term> ps, Sort r)
      : name(std::move(n)), params(std::move(ps)), ret(std::move(r)) {}

  std::vector<Sort> param_sorts() const {
    std::vector<Sort> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.sort());
    return out;
  }
};

/**
 * A parsed synthesis problem: functions to synthesize, universally
 * quantified variables, and constraints over both. Defined functions are
 * already inlined; invariant problems additionally keep the transition
 * system's pieces for the dedicated engine.
 */
struct Problem {
  std::string logic;
  std::vector<SynthFun> functions;
  std::vector<Term> universal_vars;
  std::vector<Term> constraints;
  bool check_synth_seen = false;
  std::vector<std::string> warnings;

  // Invariant-synthesis problems only. pre/post range over the invariant's
  // parameters; trans ranges over parameters plus their primed copies.
  bool is_invariant = false;
  Term inv_pre;
  Term inv_trans;
  Term inv_post;
  std::vector<Term> inv_state_vars;
  std::vector<Term> inv_primed_vars;

  const SynthFun* find_function(const std::string& name) const {
    for (const auto& f : functions) {
      if (f.name == name) return &f;
    }
    return nullptr;
  }

  /** All constraints as one conjunction (true when none). */
  Term conjoined_constraints() const;
};

/**
 * Literal values appearing in the problem's constraints and grammars,
 * deduplicated in first-occurrence order. Seeds default grammars and
 * bounded verification domains.
 */
std::vector<Value> literal_pool(const Problem& p);

}  // namespace minisy

#endif
