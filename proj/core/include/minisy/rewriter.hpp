#ifndef MINISY_REWRITER_HPP
#define MINISY_REWRITER_HPP

#include "minisy/term.hpp"

namespace minisy {

/**
 * Normalizes a term to a canonical form with identical semantics:
 * evaluate(rewrite(t), env) == evaluate(t, env) for every env, and
 * rewrite(rewrite(t)) == rewrite(t).
 *
 * The rule set covers constant folding across all operators, arithmetic
 * identities with polynomial-normal-form sums and canonical integer
 * comparisons, boolean simplification (flattening, sorting, double
 * negation, absorption, complements, bound merging over shared polys),
 * ite simplification, string concatenation normalization, and bitvector
 * identities. Applications are capped by a per-call budget; on
 * exhaustion the current (still equivalent) term is returned.
 */
Term rewrite(const Term& t);

/** Rewrite with an explicit rule-application budget. */
Term rewrite(const Term& t, long budget);

}  // namespace minisy

#endif
