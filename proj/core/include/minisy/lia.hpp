#ifndef MINISY_LIA_HPP
#define MINISY_LIA_HPP

#include <string>

#include "minisy/eval.hpp"
#include "minisy/term.hpp"

namespace minisy {

enum class LiaStatus { Sat, Unsat, Unknown };

struct LiaResult {
  LiaStatus status;
  Environment model;   // populated for Sat; satisfies the input formula
  std::string reason;  // populated for Unknown

  bool sat() const { return status == LiaStatus::Sat; }
  bool unsat() const { return status == LiaStatus::Unsat; }
};

struct LiaBudget {
  uint64_t max_nodes = uint64_t(1) << 22;  // truth-assignment search nodes
  int bb_depth = 200;                      // branch-and-bound depth
  int max_diseq_cases = 1024;              // disequality case splits per leaf
};

/**
 * Satisfiability of a quantifier-free formula over linear integer
 * arithmetic and boolean structure (boolean variables, and/or/not/
 * implies/ite/equality as connectives, canonical <= and = atoms over
 * linear integer polynomials). The input is normalized first; assignments
 * to the atoms are enumerated with partial-evaluation pruning and each
 * propositionally satisfying assignment is checked for integer
 * feasibility by exact rational simplex plus branch-and-bound.
 *
 * Sat results carry a model binding every free variable and verified
 * against the original formula. Unknown is returned for out-of-scope
 * structure (nonlinear or non-integer atoms, uninterpreted calls) or
 * exhausted budgets; Unsat is only returned after the full assignment
 * space has been refuted.
 */
LiaResult qf_lia_sat(const Term& formula, const LiaBudget& budget = {});

}  // namespace minisy

#endif
