#ifndef MINISY_SINGLE_INVOCATION_HPP
#define MINISY_SINGLE_INVOCATION_HPP

#include <optional>
#include <vector>

#include "minisy/cegis.hpp"
#include "minisy/problem.hpp"

namespace minisy {

/**
 * Shape of a conjecture whose every occurrence of the target function is
 * the same application to distinct variables. Such problems reduce to
 * finding, for each point, one output value satisfying the constraints
 * with the application replaced by a free output variable.
 */
struct SiProblem {
  std::vector<Term> args;  // the shared invocation tuple, all variables
  Term output;             // fresh variable standing for the invocation
  Term phi;                // constraints with the invocation replaced
};

std::optional<SiProblem> detect_single_invocation(const Problem& p,
                                                  const SynthFun& f);

struct SiConfig {
  int max_rounds = 64;
  uint64_t seed = 0;
  VerifierConfig verifier;
};

/**
 * Solves single-invocation conjectures by instantiation refinement: a
 * growing set of candidate output terms is maintained, and each round a
 * point where all of them fail is found and used to select a new term
 * (a symbolic bound read off the constraint atoms, or a literal value).
 * When no such point remains, the candidates are assembled into a nested
 * conditional solution. A point admitting no output value at all proves
 * the conjecture infeasible.
 */
class SingleInvocationEngine {
 public:
  SingleInvocationEngine(const Problem& p, const SynthFun& f,
                         const DatatypeGrammar& g, SiConfig cfg = {});

  SolveOutcome solve();

  struct Stats {
    int rounds = 0;
    size_t basis_terms = 0;
    bool reconstructed = false;
  };
  const Stats& stats() const { return d_stats; }

 private:
  const Problem& d_prob;
  const SynthFun& d_fun;
  const DatatypeGrammar& d_grammar;
  SiConfig d_cfg;
  Stats d_stats;

  std::optional<Term> select_term(const SiProblem& si, const Environment& m,
                                  bool& proved_infeasible);
  Term assemble(const SiProblem& si, const std::vector<Term>& basis) const;
};

}  // namespace minisy

#endif
