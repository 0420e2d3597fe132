#ifndef MINISY_CEGIS_HPP
#define MINISY_CEGIS_HPP

#include <string>
#include <vector>

#include "minisy/enumerator.hpp"
#include "minisy/problem.hpp"
#include "minisy/verifier.hpp"

namespace minisy {

/** Final verdict of a synthesis engine for one function. */
struct SolveOutcome {
  enum class Kind { Solution, Infeasible, Unknown };
  Kind kind = Kind::Unknown;
  Term body;           // Solution: closed body over the function parameters
  std::string reason;  // Unknown

  static SolveOutcome solution(Term b) {
    return {Kind::Solution, std::move(b), ""};
  }
  static SolveOutcome infeasible() { return {Kind::Infeasible, Term(), ""}; }
  static SolveOutcome unknown(std::string why) {
    return {Kind::Unknown, Term(), std::move(why)};
  }
};

struct CegisConfig {
  uint64_t max_candidates = 1000000;
  int64_t timeout_ms = 60000;
  int max_size = 12;
  uint64_t seed = 0;
  VerifierConfig verifier;
};

struct CegisStats {
  uint64_t candidates = 0;
  uint64_t fast_rejected = 0;
  uint64_t repair_attempts = 0;
  uint64_t verifier_calls = 0;
  Enumerator::Stats enumeration;
};

/**
 * Refinement loop over enumerated candidates: each candidate is first
 * replayed against all stored counterexamples, then fully verified;
 * counterexamples from failed verifications accumulate. Candidates with
 * open constant holes go through an inner repair loop that solves for
 * hole values satisfying the constraints on a growing set of points and
 * verifies each filled candidate.
 *
 * Infeasibility is reported only when the grammar was exhausted at every
 * size and every rejection along the way was exact.
 */
class CegisEngine {
 public:
  CegisEngine(const Problem& p, const SynthFun& f, const DatatypeGrammar& g,
              CegisConfig cfg = {});

  SolveOutcome solve();

  const CegisStats& stats() const { return d_stats; }
  const std::vector<Environment>& counterexamples() const { return d_cexs; }

 private:
  const Problem& d_prob;
  const SynthFun& d_fun;
  const DatatypeGrammar& d_grammar;
  CegisConfig d_cfg;
  Verifier d_verifier;
  Enumerator d_enum;
  CegisStats d_stats;
  std::vector<Environment> d_cexs;
  bool d_all_rejections_exact = true;

  struct RepairResult {
    enum class Kind { Solved, ExactNoSolution, GaveUp } kind;
    Term body;
  };

  Term instantiated(const Term& body) const;
  bool fast_reject(const Term& instantiated_formula);
  RepairResult repair_constants(const EmbeddedRef& cand);
  void remember_cex(const Environment& env);
};

}  // namespace minisy

#endif
