#ifndef MINISY_PBE_HPP
#define MINISY_PBE_HPP

#include <optional>
#include <vector>

#include "minisy/cegis.hpp"
#include "minisy/problem.hpp"

namespace minisy {

/** One input/output example for the target function. */
struct PbeExample {
  std::vector<Value> inputs;
  Value output;
};

/**
 * Recognizes conjectures given purely by examples: every constraint equates
 * an application of the target on literal arguments with a literal result
 * (boolean applications may appear bare or negated). Returns the examples,
 * or nothing when any constraint has a different shape.
 */
std::optional<std::vector<PbeExample>> extract_pbe(const Problem& p,
                                                   const SynthFun& f);

struct PbeConfig {
  size_t per_round = 1000;      // candidate terms pulled per growth round
  size_t max_pool = 200000;     // total candidate budget
  int64_t timeout_ms = 30000;
  int max_dt_depth = 64;
  int max_size = 16;
  uint64_t seed = 0;
  VerifierConfig verifier;
};

/**
 * Example-driven synthesis: terms are enumerated and deduplicated by their
 * outputs on the example inputs; a term matching every example is returned
 * directly, string outputs are additionally split as a concatenation of
 * two pool terms, and otherwise pool terms covering different examples are
 * combined into a decision tree over enumerated conditions, choosing at
 * each node the condition of maximal information gain on which pool term
 * first covers each example.
 */
class PbeEngine {
 public:
  PbeEngine(const Problem& p, const SynthFun& f, const DatatypeGrammar& g,
            PbeConfig cfg = {});

  SolveOutcome solve();

  struct Stats {
    size_t terms = 0;
    size_t conditions = 0;
    int rounds = 0;
    bool used_decision_tree = false;
    bool used_concat_split = false;
  };
  const Stats& stats() const { return d_stats; }

 private:
  const Problem& d_prob;
  const SynthFun& d_fun;
  const DatatypeGrammar& d_grammar;
  PbeConfig d_cfg;
  Stats d_stats;
};

}  // namespace minisy

#endif
