#include "minisy/rewriter.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "minisy/eval.hpp"
#include "minisy/linear.hpp"

namespace minisy {

namespace {

constexpr long kDefaultBudget = 10000;

struct Ctx {
  long budget;
  bool exhausted = false;

  /** Charges one rule application; returns false once the budget is gone. */
  bool spend() {
    if (budget <= 0) {
      exhausted = true;
      return false;
    }
    --budget;
    return true;
  }
};

Term norm_apply(Op op, std::vector<Term> ch, Ctx& ctx);

bool all_constant(const std::vector<Term>& ch) {
  for (const auto& c : ch) {
    if (!c.is_constant()) return false;
  }
  return true;
}

Term fold_constant(Op op, const std::vector<Term>& ch) {
  Environment empty;
  Term t = Term::apply(op, ch);
  return Term::constant(evaluate(t, empty));
}

/** Floor division for a positive divisor. */
Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && a < 0) q -= 1;
  return q;
}

/**
 * Emits the canonical comparison `lhs <= rhs` for the constraint
 * `poly <= bound`: positive monomials on the left, negated negative
 * monomials plus the bound on the right. The poly must be nonempty
 * and gcd-reduced.
 */
Term emit_le_atom(const LinearPoly& poly, const Integer& bound) {
  LinearPoly lhs;
  LinearPoly rhs;
  for (const auto& [atom, coeff] : poly.coeffs) {
    if (coeff > 0) {
      lhs.add_monomial(atom, coeff);
    } else {
      rhs.add_monomial(atom, -coeff);
    }
  }
  rhs.constant = bound;
  return Term::apply(Op::Le, {linear_emit(lhs), linear_emit(rhs)});
}

/** Emits the canonical equality for `poly == bound` (same side split). */
Term emit_eq_atom(const LinearPoly& poly, const Integer& bound) {
  LinearPoly lhs;
  LinearPoly rhs;
  for (const auto& [atom, coeff] : poly.coeffs) {
    if (coeff > 0) {
      lhs.add_monomial(atom, coeff);
    } else {
      rhs.add_monomial(atom, -coeff);
    }
  }
  rhs.constant = bound;
  return Term::apply(Op::Eq, {linear_emit(lhs), linear_emit(rhs)});
}

/**
 * Normalizes an integer comparison `a <= b (+ strictness shift)` into
 * either a boolean constant or the canonical `<=` atom with reduced
 * coefficients.
 */
Term norm_int_le(const Term& a, const Term& b, const Integer& shift) {
  LinearPoly poly = linear_decompose(a);
  poly -= linear_decompose(b);
  Integer bound = -poly.constant + shift;
  poly.constant = 0;
  if (poly.coeffs.empty()) return Term::bool_const(0 <= bound);
  Integer g = poly.content();
  if (g > 1) {
    poly.scale_down_exact(g);
    bound = floor_div(bound, g);
  }
  return emit_le_atom(poly, bound);
}

/** Normalizes an integer equality into a constant or a canonical atom. */
Term norm_int_eq(const Term& a, const Term& b) {
  LinearPoly poly = linear_decompose(a);
  poly -= linear_decompose(b);
  Integer bound = -poly.constant;
  poly.constant = 0;
  if (poly.coeffs.empty()) return Term::bool_const(bound == 0);
  Integer g = poly.content();
  if (g > 1) {
    if (bound % g != 0) return Term::false_term();
    poly.scale_down_exact(g);
    bound /= g;
  }
  if (poly.coeffs.begin()->second < 0) {
    poly.scale(-1);
    bound = -bound;
  }
  return emit_eq_atom(poly, bound);
}

/** Decomposes a canonical `<=` atom back into (poly, bound). */
bool split_le_atom(const Term& t, LinearPoly& poly, Integer& bound) {
  if (t.kind() != Term::Kind::Apply || t.op() != Op::Le) return false;
  if (!t.child(0).sort().is_int()) return false;
  poly = linear_decompose(t.child(0));
  poly -= linear_decompose(t.child(1));
  bound = -poly.constant;
  poly.constant = 0;
  return !poly.coeffs.empty();
}

Term norm_not(Term a, Ctx& ctx) {
  if (!ctx.spend()) return Term::apply(Op::Not, {a});
  if (a.is_constant()) return Term::bool_const(!a.value().as_bool());
  if (a.kind() == Term::Kind::Apply) {
    switch (a.op()) {
      case Op::Not:
        return a.child(0);
      case Op::Le:
        if (a.child(0).sort().is_int()) {
          return norm_int_le(a.child(1), a.child(0), Integer(-1));
        }
        break;
      case Op::BvUlt:
        return Term::apply(Op::BvUle, {a.child(1), a.child(0)});
      case Op::BvUle:
        return Term::apply(Op::BvUlt, {a.child(1), a.child(0)});
      default:
        break;
    }
  }
  return Term::apply(Op::Not, {a});
}

/**
 * Conjunction / disjunction normalization: flattens nested occurrences,
 * folds constants, sorts and deduplicates, detects complements and
 * absorbed children, and merges integer bounds over a shared polynomial.
 */
Term norm_and_or(Op op, const std::vector<Term>& ch, Ctx& ctx) {
  const bool is_and = op == Op::And;
  const Term neutral = is_and ? Term::true_term() : Term::false_term();
  const Term absorbing = is_and ? Term::false_term() : Term::true_term();
  if (!ctx.spend()) return Term::apply(op, ch);

  std::vector<Term> flat;
  for (const auto& c : ch) {
    if (c.kind() == Term::Kind::Apply && c.op() == op) {
      for (size_t i = 0; i < c.arity(); ++i) flat.push_back(c.child(i));
    } else {
      flat.push_back(c);
    }
  }

  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());

  std::vector<Term> kept;
  for (const auto& c : flat) {
    if (c == absorbing) return absorbing;
    if (c == neutral) continue;
    kept.push_back(c);
  }

  // Complements annihilate: x together with (not x).
  std::unordered_map<Term, bool, TermHash> present;
  for (const auto& c : kept) present.emplace(c, true);
  for (const auto& c : kept) {
    if (c.kind() == Term::Kind::Apply && c.op() == Op::Not &&
        present.count(c.child(0))) {
      return absorbing;
    }
  }

  // Merge integer bounds that constrain the same polynomial. For each
  // canonical atom poly <= bound, conjunction keeps the tightest bound
  // and disjunction the loosest; opposite-sign polys either contradict
  // (and) or cover all integers (or).
  std::map<std::string, std::pair<LinearPoly, Integer>> bounds;
  std::vector<Term> merged;
  bool has_le = false;
  for (const auto& c : kept) {
    LinearPoly poly;
    Integer bound;
    if (!split_le_atom(c, poly, bound)) {
      merged.push_back(c);
      continue;
    }
    has_le = true;
    LinearPoly key_poly = poly;
    key_poly.constant = 0;
    std::string key = linear_emit(key_poly).str();
    auto it = bounds.find(key);
    if (it == bounds.end()) {
      bounds.emplace(key, std::make_pair(poly, bound));
    } else if (is_and ? bound < it->second.second
                      : bound > it->second.second) {
      it->second.second = bound;
    }
  }
  if (has_le) {
    for (const auto& [key, pb] : bounds) {
      LinearPoly negated = pb.first;
      negated.scale(-1);
      LinearPoly neg_key = negated;
      neg_key.constant = 0;
      auto it = bounds.find(linear_emit(neg_key).str());
      if (it != bounds.end()) {
        // poly <= c1 together with poly >= -c2.
        const Integer& c1 = pb.second;
        const Integer& c2 = it->second.second;
        if (is_and && -c2 > c1) return absorbing;
        if (!is_and && -c2 <= c1 + 1) return absorbing;
      }
      merged.push_back(emit_le_atom(pb.first, pb.second));
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  }

  // Absorption: under And, a disjunction containing a sibling conjunct
  // is redundant (dually under Or).
  std::unordered_map<Term, bool, TermHash> members;
  for (const auto& c : merged) members.emplace(c, true);
  const Op dual = is_and ? Op::Or : Op::And;
  std::vector<Term> result;
  for (const auto& c : merged) {
    bool absorbed = false;
    if (c.kind() == Term::Kind::Apply && c.op() == dual) {
      for (size_t i = 0; i < c.arity(); ++i) {
        if (members.count(c.child(i))) {
          absorbed = true;
          break;
        }
      }
    }
    if (!absorbed) result.push_back(c);
  }

  if (result.empty()) return neutral;
  if (result.size() == 1) return result[0];
  return Term::apply(op, result);
}

Term norm_ite(const Term& c, const Term& a, const Term& b, Ctx& ctx) {
  if (!ctx.spend()) return Term::apply(Op::Ite, {c, a, b});
  if (c.is_constant()) return c.value().as_bool() ? a : b;
  if (a == b) return a;
  if (c.kind() == Term::Kind::Apply && c.op() == Op::Not) {
    return norm_ite(c.child(0), b, a, ctx);
  }
  if (a.sort().is_bool()) {
    if (a.is_constant() && b.is_constant()) {
      return a.value().as_bool() ? c : norm_not(c, ctx);
    }
    if (a.is_constant()) {
      return a.value().as_bool() ? norm_and_or(Op::Or, {c, b}, ctx)
                                 : norm_and_or(Op::And, {norm_not(c, ctx), b},
                                               ctx);
    }
    if (b.is_constant()) {
      return b.value().as_bool()
                 ? norm_and_or(Op::Or, {norm_not(c, ctx), a}, ctx)
                 : norm_and_or(Op::And, {c, a}, ctx);
    }
  }
  return Term::apply(Op::Ite, {c, a, b});
}

Term norm_eq(const Term& a, const Term& b, Ctx& ctx) {
  if (!ctx.spend()) return Term::apply(Op::Eq, {a, b});
  if (a == b) return Term::true_term();
  if (a.sort().is_int()) return norm_int_eq(a, b);
  if (a.sort().is_bool()) {
    if (a.is_constant()) {
      return a.value().as_bool() ? b : norm_not(b, ctx);
    }
    if (b.is_constant()) {
      return b.value().as_bool() ? a : norm_not(a, ctx);
    }
  }
  if (a.is_constant() && b.is_constant()) {
    return Term::bool_const(a.value() == b.value());
  }
  if (Term::compare(a, b) > 0) return Term::apply(Op::Eq, {b, a});
  return Term::apply(Op::Eq, {a, b});
}

Term norm_concat(const std::vector<Term>& ch, Ctx& ctx) {
  if (!ctx.spend()) return Term::apply(Op::StrConcat, ch);
  std::vector<Term> flat;
  for (const auto& c : ch) {
    if (c.kind() == Term::Kind::Apply && c.op() == Op::StrConcat) {
      for (size_t i = 0; i < c.arity(); ++i) flat.push_back(c.child(i));
    } else {
      flat.push_back(c);
    }
  }
  std::vector<Term> out;
  for (const auto& c : flat) {
    if (c.is_constant()) {
      if (c.value().as_string().empty()) continue;
      if (!out.empty() && out.back().is_constant()) {
        CodePoints joined = out.back().value().as_string();
        const CodePoints& tail = c.value().as_string();
        joined.insert(joined.end(), tail.begin(), tail.end());
        out.back() = Term::constant(Value(joined));
        continue;
      }
    }
    out.push_back(c);
  }
  if (out.empty()) return Term::constant(Value(CodePoints{}));
  if (out.size() == 1) return out[0];
  return Term::apply(Op::StrConcat, out);
}

/** Length distributes over concatenation into a linear sum. */
Term norm_str_len(const Term& s, Ctx& ctx) {
  if (!ctx.spend()) return Term::apply(Op::StrLen, {s});
  if (s.is_constant()) {
    return Term::int_const(Integer(s.value().as_string().size()));
  }
  if (s.kind() == Term::Kind::Apply && s.op() == Op::StrConcat) {
    LinearPoly sum;
    for (size_t i = 0; i < s.arity(); ++i) {
      const Term& part = s.child(i);
      if (part.is_constant()) {
        sum.constant += Integer(part.value().as_string().size());
      } else {
        sum.add_monomial(Term::apply(Op::StrLen, {part}), 1);
      }
    }
    return linear_emit(sum);
  }
  return Term::apply(Op::StrLen, {s});
}

bool bv_is_zero(const Term& t) {
  return t.is_constant() && t.value().as_bitvec().bits == 0;
}

bool bv_is_ones(const Term& t) {
  const BitVec& bv = t.value().as_bitvec();
  Integer ones = (Integer(1) << bv.width) - 1;
  return bv.bits == ones;
}

Term bv_zero_like(const Term& t) {
  return Term::constant(Value(BitVec(t.sort().bv_width(), 0)));
}

Term norm_bv(Op op, const std::vector<Term>& ch, Ctx& ctx) {
  if (!ctx.spend()) return Term::apply(op, ch);
  const Term& a = ch[0];
  switch (op) {
    case Op::BvAdd:
    case Op::BvOr:
    case Op::BvXor: {
      const Term& b = ch[1];
      if (bv_is_zero(a)) return b;
      if (bv_is_zero(b)) return a;
      if (op == Op::BvXor && a == b) return bv_zero_like(a);
      if (op == Op::BvOr) {
        if (a == b) return a;
        if (a.is_constant() && bv_is_ones(a)) return a;
        if (b.is_constant() && bv_is_ones(b)) return b;
      }
      break;
    }
    case Op::BvAnd: {
      const Term& b = ch[1];
      if (a == b) return a;
      if (bv_is_zero(a) || bv_is_zero(b)) return bv_zero_like(a);
      if (a.is_constant() && bv_is_ones(a)) return b;
      if (b.is_constant() && bv_is_ones(b)) return a;
      break;
    }
    case Op::BvSub: {
      const Term& b = ch[1];
      if (bv_is_zero(b)) return a;
      if (a == b) return bv_zero_like(a);
      break;
    }
    case Op::BvShl:
    case Op::BvLshr: {
      const Term& b = ch[1];
      if (bv_is_zero(b)) return a;
      if (bv_is_zero(a)) return a;
      if (b.is_constant() &&
          b.value().as_bitvec().bits >= a.sort().bv_width()) {
        return bv_zero_like(a);
      }
      break;
    }
    case Op::BvNot:
    case Op::BvNeg:
      if (a.kind() == Term::Kind::Apply && a.op() == op) return a.child(0);
      break;
    case Op::BvUlt: {
      const Term& b = ch[1];
      if (a == b) return Term::false_term();
      if (bv_is_zero(b)) return Term::false_term();
      return Term::apply(op, ch);
    }
    case Op::BvUle: {
      const Term& b = ch[1];
      if (a == b) return Term::true_term();
      if (bv_is_zero(a)) return Term::true_term();
      return Term::apply(op, ch);
    }
    default:
      break;
  }
  if (op_is_commutative(op) && Term::compare(ch[0], ch[1]) > 0) {
    return Term::apply(op, {ch[1], ch[0]});
  }
  return Term::apply(op, ch);
}

Term norm_apply(Op op, std::vector<Term> ch, Ctx& ctx) {
  if (all_constant(ch)) {
    if (ctx.spend()) return fold_constant(op, ch);
    return Term::apply(op, ch);
  }
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Neg:
    case Op::Mul: {
      if (!ctx.spend()) return Term::apply(op, ch);
      return linear_emit(linear_decompose(Term::apply(op, ch)));
    }
    case Op::Le:
      if (ch[0].sort().is_int()) {
        if (!ctx.spend()) return Term::apply(op, ch);
        return norm_int_le(ch[0], ch[1], Integer(0));
      }
      return Term::apply(op, ch);
    case Op::Lt:
      if (!ctx.spend()) return Term::apply(op, ch);
      return norm_int_le(ch[0], ch[1], Integer(-1));
    case Op::Ge:
      if (!ctx.spend()) return Term::apply(op, ch);
      return norm_int_le(ch[1], ch[0], Integer(0));
    case Op::Gt:
      if (!ctx.spend()) return Term::apply(op, ch);
      return norm_int_le(ch[1], ch[0], Integer(-1));
    case Op::Eq:
      return norm_eq(ch[0], ch[1], ctx);
    case Op::Not:
      return norm_not(ch[0], ctx);
    case Op::And:
    case Op::Or:
      return norm_and_or(op, ch, ctx);
    case Op::Implies: {
      if (!ctx.spend()) return Term::apply(op, ch);
      return norm_and_or(Op::Or, {norm_not(ch[0], ctx), ch[1]}, ctx);
    }
    case Op::Ite:
      return norm_ite(ch[0], ch[1], ch[2], ctx);
    case Op::StrConcat:
      return norm_concat(ch, ctx);
    case Op::StrLen:
      return norm_str_len(ch[0], ctx);
    case Op::StrContains:
      if (ch[1].is_constant() && ch[1].value().as_string().empty()) {
        if (ctx.spend()) return Term::true_term();
      }
      return Term::apply(op, ch);
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvNot:
    case Op::BvNeg:
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvUlt:
    case Op::BvUle:
      return norm_bv(op, ch, ctx);
    default:
      return Term::apply(op, ch);
  }
}

std::mutex g_cache_mutex;
std::unordered_map<Term, Term, TermHash>& cache() {
  static std::unordered_map<Term, Term, TermHash> c;
  return c;
}

std::optional<Term> cache_lookup(const Term& t) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = cache().find(t);
  if (it == cache().end()) return std::nullopt;
  return it->second;
}

void cache_store(const Term& key, const Term& normal) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto& c = cache();
  if (c.size() >= (1u << 22)) c.clear();
  c.emplace(key, normal);
}

Term rewrite_rec(const Term& t, Ctx& ctx) {
  if (t.kind() == Term::Kind::Constant || t.kind() == Term::Kind::Variable) {
    return t;
  }
  if (auto hit = cache_lookup(t)) return *hit;
  std::vector<Term> ch;
  ch.reserve(t.arity());
  for (size_t i = 0; i < t.arity(); ++i) {
    ch.push_back(rewrite_rec(t.child(i), ctx));
  }
  Term result = t.kind() == Term::Kind::Call
                    ? Term::call(t.name(), t.sort(),
                                 std::vector<Term>(ch.begin(), ch.end()))
                    : norm_apply(t.op(), std::move(ch), ctx);
  if (!ctx.exhausted) cache_store(t, result);
  return result;
}

}  // namespace

Term rewrite(const Term& t, long budget) {
  Ctx ctx{budget};
  return rewrite_rec(t, ctx);
}

Term rewrite(const Term& t) { return rewrite(t, kDefaultBudget); }

}  // namespace minisy
