#ifndef MINISY_LINEAR_HPP
#define MINISY_LINEAR_HPP

#include <map>
#include <optional>

#include "minisy/term.hpp"

namespace minisy {

/**
 * An integer-sorted term viewed as a linear combination
 * sum(coeff_i * atom_i) + constant, where atoms are maximal non-arithmetic
 * subterms (variables, ite-terms, str.len applications, ...) ordered
 * structurally.
 */
struct LinearPoly {
  std::map<Term, Integer> coeffs;  // nonzero entries only
  Integer constant;

  LinearPoly() : constant(0) {}
  explicit LinearPoly(Integer c) : constant(std::move(c)) {}

  bool is_constant() const { return coeffs.empty(); }
  void add_monomial(const Term& atom, const Integer& c);
  LinearPoly& operator+=(const LinearPoly& o);
  LinearPoly& operator-=(const LinearPoly& o);
  void scale(const Integer& k);
  /** Divides every coefficient by g; all must be exactly divisible. */
  void scale_down_exact(const Integer& g);
  bool operator==(const LinearPoly& o) const {
    return constant == o.constant && coeffs == o.coeffs;
  }
  /** gcd of coefficient magnitudes; 0 for constant polys. */
  Integer content() const;
};

/** Decomposes an Int-sorted term. Total: non-arithmetic roots become atoms. */
LinearPoly linear_decompose(const Term& t);

/** Rebuilds the canonical term for a poly (sorted monomials, constant last). */
Term linear_emit(const LinearPoly& p);

/**
 * True when every atom of the poly is an Int variable, i.e. the poly lies
 * in plain linear integer arithmetic.
 */
bool poly_over_variables(const LinearPoly& p);

}  // namespace minisy

#endif
