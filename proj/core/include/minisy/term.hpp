#ifndef MINISY_TERM_HPP
#define MINISY_TERM_HPP

#include <span>
#include <string>
#include <vector>

#include "minisy/sort.hpp"
#include "minisy/value.hpp"

namespace minisy {

/** The fixed theory signature. Multiplication is by-constant only. */
enum class Op {
  Add, Sub, Neg, Mul, Ite, Eq, Le, Lt, Ge, Gt,
  And, Or, Not, Implies,
  StrConcat, StrLen, StrSubstr, StrIndexof, StrAt, StrContains, StrReplace,
  StrToInt, IntToStr,
  BvAdd, BvSub, BvAnd, BvOr, BvXor, BvNot, BvNeg, BvShl, BvLshr, BvUlt, BvUle,
};

/** SMT-LIB spelling of an operator, e.g. "+", "str.++", "bvadd". */
const char* op_name(Op op);
/** Looks up an operator by (possibly aliased) SMT-LIB name; false if unknown. */
bool op_by_name(const std::string& name, Op& out);
bool op_is_commutative(Op op);
bool op_is_associative(Op op);

struct TermData;

/**
 * An immutable, hash-consed theory term. Copies are cheap handles;
 * equality is pointer equality on the interned node. Nodes are one of:
 * a constant value, a variable, an operator application, or an
 * uninterpreted call (used for synth-fun applications in constraints).
 */
class Term {
 public:
  enum class Kind { Constant, Variable, Apply, Call };

  Term() : d_node(nullptr) {}

  static Term constant(Value v);
  static Term variable(const std::string& name, Sort sort);
  /** Builds an application; throws SortError unless well-sorted. */
  static Term apply(Op op, std::vector<Term> children);
  /** An application of an uninterpreted function (a synthesis target). */
  static Term call(const std::string& fn, Sort ret, std::vector<Term> args);

  static Term int_const(long v) { return constant(Value::of_int(v)); }
  static Term int_const(Integer v) { return constant(Value(std::move(v))); }
  static Term bool_const(bool b) { return constant(Value(b)); }
  static Term true_term() { return bool_const(true); }
  static Term false_term() { return bool_const(false); }

  bool is_null() const { return d_node == nullptr; }
  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_apply() const { return kind() == Kind::Apply; }
  bool is_call() const { return kind() == Kind::Call; }
  bool is_apply(Op op) const { return is_apply() && this->op() == op; }

  Op op() const;
  /** Variable or called-function name. */
  const std::string& name() const;
  const Value& value() const;
  std::span<const Term> children() const;
  size_t arity() const { return children().size(); }
  Term child(size_t i) const { return children()[i]; }
  const Sort& sort() const;
  /** Number of nodes in the term tree (leaves count 1). */
  size_t tree_size() const;

  bool operator==(const Term& o) const { return d_node == o.d_node; }
  bool operator!=(const Term& o) const { return d_node != o.d_node; }

  /** Stable structural order, identical across processes. */
  static int compare(const Term& a, const Term& b);
  bool operator<(const Term& o) const { return compare(*this, o) < 0; }

  size_t hash() const;
  std::string str() const;

  const TermData* raw() const { return d_node; }

 private:
  explicit Term(const TermData* n) : d_node(n) {}
  const TermData* d_node;
};

struct TermHash {
  size_t operator()(const Term& t) const { return t.hash(); }
};

/** Convenience constructors for common shapes. */
namespace mk {
inline Term add(Term a, Term b) { return Term::apply(Op::Add, {a, b}); }
inline Term sub(Term a, Term b) { return Term::apply(Op::Sub, {a, b}); }
inline Term neg(Term a) { return Term::apply(Op::Neg, {a}); }
inline Term mul(Term a, Term b) { return Term::apply(Op::Mul, {a, b}); }
inline Term ite(Term c, Term a, Term b) { return Term::apply(Op::Ite, {c, a, b}); }
inline Term eq(Term a, Term b) { return Term::apply(Op::Eq, {a, b}); }
inline Term le(Term a, Term b) { return Term::apply(Op::Le, {a, b}); }
inline Term lt(Term a, Term b) { return Term::apply(Op::Lt, {a, b}); }
inline Term ge(Term a, Term b) { return Term::apply(Op::Ge, {a, b}); }
inline Term gt(Term a, Term b) { return Term::apply(Op::Gt, {a, b}); }
inline Term and_(std::vector<Term> ts) { return Term::apply(Op::And, std::move(ts)); }
inline Term or_(std::vector<Term> ts) { return Term::apply(Op::Or, std::move(ts)); }
inline Term not_(Term a) { return Term::apply(Op::Not, {a}); }
inline Term implies(Term a, Term b) { return Term::apply(Op::Implies, {a, b}); }
}  // namespace mk

}  // namespace minisy

#endif
