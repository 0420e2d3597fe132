#ifndef MINISY_INVARIANT_HPP
#define MINISY_INVARIANT_HPP

#include <vector>

#include "minisy/cegis.hpp"
#include "minisy/problem.hpp"

namespace minisy {

struct InvariantConfig {
  int max_rounds = 200;
  size_t per_round = 500;       // predicate pool growth per round
  size_t max_pool = 20000;
  int64_t timeout_ms = 30000;
  int max_size = 12;
  uint64_t seed = 0;
  VerifierConfig verifier;
};

/**
 * Conjunctive strengthening for loop-invariant conjectures. The candidate
 * invariant is a conjunction of enumerated predicates, grown to exclude
 * states that provably violate the postcondition and pruned to keep states
 * that are provably reachable. State labels come from failed verification
 * rounds: initiation failures mark states that must be inside, safety
 * failures mark states that must be outside, and consecution failures
 * contribute transition pairs along which labels propagate. A state
 * labeled both ways proves the conjecture infeasible.
 */
class InvariantEngine {
 public:
  InvariantEngine(const Problem& p, const SynthFun& f,
                  const DatatypeGrammar& g, InvariantConfig cfg = {});

  SolveOutcome solve();

  struct Stats {
    int rounds = 0;
    size_t pool = 0;
    size_t must_in = 0;
    size_t must_out = 0;
    size_t pairs = 0;
  };
  const Stats& stats() const { return d_stats; }

 private:
  const Problem& d_prob;
  const SynthFun& d_fun;
  const DatatypeGrammar& d_grammar;
  InvariantConfig d_cfg;
  Stats d_stats;
};

}  // namespace minisy

#endif
