#ifndef MINISY_VERIFIER_HPP
#define MINISY_VERIFIER_HPP

#include <string>
#include <unordered_map>

#include "minisy/lia.hpp"
#include "minisy/problem.hpp"

namespace minisy {

enum class VerifyStatus { Valid, CounterexampleFound, Unknown };

struct VerifyResult {
  VerifyStatus status = VerifyStatus::Unknown;
  Environment counterexample;  // CounterexampleFound: binds universal vars
  bool exact = true;           // Valid verdicts: proven, not just unrefuted
  std::string reason;          // Unknown verdicts

  bool valid() const { return status == VerifyStatus::Valid; }
  bool refuted() const { return status == VerifyStatus::CounterexampleFound; }
};

struct VerifierConfig {
  long long int_bound = 32;      // box half-width for integer variables
  size_t max_string_len = 6;
  uint64_t max_points = 200000;  // bounded-search evaluation budget
};

/**
 * Checks candidate bodies against all constraints. Tiers, in order:
 * ground evaluation when nothing is universally quantified (exact);
 * linear integer reasoning on the negated constraint with conditional
 * subterms hoisted into boolean structure (exact); bounded exhaustive
 * search over small domains. The bounded tier proves validity only when
 * it provably covered the whole (finite) domain; otherwise a clean sweep
 * reports Unknown. Counterexamples from any tier are re-checked by
 * evaluation, so they are always genuine.
 */
class Verifier {
 public:
  explicit Verifier(const Problem& p, VerifierConfig cfg = {});

  /** bodies maps each synth-fun name to a closed candidate body. */
  VerifyResult check(const std::unordered_map<std::string, Term>& bodies);

  /** Constraints with candidates substituted, as one conjunction. */
  Term instantiate(const std::unordered_map<std::string, Term>& bodies) const;

  uint64_t calls() const { return d_calls; }

 private:
  const Problem& d_prob;
  VerifierConfig d_cfg;
  uint64_t d_calls = 0;

  VerifyResult bounded_search(const Term& formula);
};

/**
 * Hoists integer-sorted conditionals out of atoms: an atom A containing
 * ite(c, a, b) becomes (c and A[a]) or ((not c) and A[b]), recursively,
 * leaving a formula whose atoms are conditional-free.
 */
Term lift_int_ites(const Term& formula);

}  // namespace minisy

#endif
