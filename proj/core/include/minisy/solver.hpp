#ifndef MINISY_SOLVER_HPP
#define MINISY_SOLVER_HPP

#include <string>
#include <vector>

#include "minisy/cegis.hpp"
#include "minisy/problem.hpp"

namespace minisy {

enum class Strategy { Auto, Fast, Si, Pbe, Unif };

/** Parses a strategy name; throws std::invalid_argument on anything else. */
Strategy strategy_from_name(const std::string& name);

struct SolverConfig {
  Strategy strategy = Strategy::Auto;
  int64_t timeout_ms = 60000;
  int max_size = 12;
  int verify_bound = 32;  // half-width of the integer box used for checking
  uint64_t seed = 0;
};

struct SolverStats {
  std::string strategy;  // engine that produced the final outcome
  uint64_t enumerated = 0;
  uint64_t admitted = 0;
  uint64_t verifier_calls = 0;
  int rounds = 0;
};

struct SolveReport {
  SolveOutcome outcome;
  std::string function_name;
  SolverStats stats;
  std::vector<std::string> warnings;
};

/**
 * Strategy dispatch for one conjecture: example-shaped problems go to the
 * example engine, invariant conjectures split their budget between plain
 * enumeration and conjunctive strengthening, single-invocation arithmetic
 * problems try instantiation-based solving, and everything falls back to
 * enumerative refinement. A forced strategy that does not fit the problem
 * shape degrades to enumerative refinement with a warning.
 */
class Solver {
 public:
  Solver(const Problem& p, SolverConfig cfg = {});

  SolveReport solve();

 private:
  const Problem& d_prob;
  SolverConfig d_cfg;
};

}  // namespace minisy

#endif
