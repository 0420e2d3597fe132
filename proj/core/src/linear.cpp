#include "minisy/linear.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace minisy {

using boost::multiprecision::gcd;

void LinearPoly::add_monomial(const Term& atom, const Integer& c) {
  if (c == 0) return;
  auto it = coeffs.find(atom);
  if (it == coeffs.end()) {
    coeffs.emplace(atom, c);
    return;
  }
  it->second += c;
  if (it->second == 0) coeffs.erase(it);
}

LinearPoly& LinearPoly::operator+=(const LinearPoly& o) {
  constant += o.constant;
  for (const auto& [a, c] : o.coeffs) add_monomial(a, c);
  return *this;
}

LinearPoly& LinearPoly::operator-=(const LinearPoly& o) {
  constant -= o.constant;
  for (const auto& [a, c] : o.coeffs) add_monomial(a, -c);
  return *this;
}

void LinearPoly::scale(const Integer& k) {
  constant *= k;
  if (k == 0) {
    coeffs.clear();
    return;
  }
  for (auto& [a, c] : coeffs) c *= k;
}

void LinearPoly::scale_down_exact(const Integer& g) {
  for (auto& [a, c] : coeffs) c /= g;
}

Integer LinearPoly::content() const {
  Integer g = 0;
  for (const auto& [a, c] : coeffs) g = gcd(g, abs(c));
  return g;
}

LinearPoly linear_decompose(const Term& t) {
  if (t.is_constant() && t.value().is_int())
    return LinearPoly(t.value().as_int());
  if (t.is_apply()) {
    switch (t.op()) {
      case Op::Add: {
        LinearPoly p;
        for (const Term& c : t.children()) p += linear_decompose(c);
        return p;
      }
      case Op::Sub: {
        LinearPoly p = linear_decompose(t.child(0));
        p -= linear_decompose(t.child(1));
        return p;
      }
      case Op::Neg: {
        LinearPoly p = linear_decompose(t.child(0));
        p.scale(Integer(-1));
        return p;
      }
      case Op::Mul: {
        // one factor is a literal by construction
        Term lit = t.child(0).is_constant() ? t.child(0) : t.child(1);
        Term other = t.child(0).is_constant() ? t.child(1) : t.child(0);
        LinearPoly p = linear_decompose(other);
        p.scale(lit.value().as_int());
        return p;
      }
      default:
        break;
    }
  }
  LinearPoly p;
  p.add_monomial(t, Integer(1));
  return p;
}

namespace {

/** coeff * atom with coeff > 0 */
Term emit_monomial(const Integer& coeff, const Term& atom) {
  if (coeff == 1) return atom;
  return Term::apply(Op::Mul, {Term::int_const(coeff), atom});
}

}  // namespace

Term linear_emit(const LinearPoly& p) {
  Term acc;
  for (const auto& [atom, coeff] : p.coeffs) {
    bool positive = coeff > 0;
    Term mono = emit_monomial(abs(coeff), atom);
    if (acc.is_null()) {
      acc = positive ? mono : Term::apply(Op::Neg, {mono});
    } else {
      acc = Term::apply(positive ? Op::Add : Op::Sub, {acc, mono});
    }
  }
  if (acc.is_null()) return Term::int_const(p.constant);
  if (p.constant > 0)
    return Term::apply(Op::Add, {acc, Term::int_const(p.constant)});
  if (p.constant < 0)
    return Term::apply(Op::Sub, {acc, Term::int_const(Integer(-p.constant))});
  return acc;
}

bool poly_over_variables(const LinearPoly& p) {
  for (const auto& [atom, c] : p.coeffs) {
    if (!atom.is_variable() || !atom.sort().is_int()) return false;
  }
  return true;
}

}  // namespace minisy
