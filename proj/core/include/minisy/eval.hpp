#ifndef MINISY_EVAL_HPP
#define MINISY_EVAL_HPP

#include <unordered_map>

#include "minisy/term.hpp"

namespace minisy {

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/** A finite valuation of variables. Bound sorts must match variable sorts. */
class Environment {
 public:
  Environment() = default;

  void bind(const std::string& name, Value v);
  const Value* lookup(const std::string& name) const;
  size_t size() const { return d_bindings.size(); }
  const std::unordered_map<std::string, Value>& bindings() const {
    return d_bindings;
  }

  std::string str() const;

 private:
  std::unordered_map<std::string, Value> d_bindings;
};

/**
 * Evaluates a closed-over term under an environment binding every free
 * variable. Total on well-sorted inputs; unbound variables and calls of
 * uninterpreted functions raise EvalError.
 */
Value evaluate(const Term& t, const Environment& env);

/** Simultaneous substitution of variables by terms (sort-preserving). */
Term substitute(const Term& t, const std::unordered_map<Term, Term, TermHash>& sub);

/** Replaces every occurrence of `from` (any subterm, same sort) by `to`. */
Term replace_subterm(const Term& t, const Term& from, const Term& to);

/**
 * Replaces every application of the named uninterpreted function with the
 * body, with parameters simultaneously substituted by the call arguments.
 */
Term reduce_call(const Term& t, const std::string& fn,
                 const std::vector<Term>& params, const Term& body);

/** All free variables of a term, in first-occurrence order. */
std::vector<Term> free_variables(const Term& t);

/** True iff the term contains a Call node of the given function name. */
bool contains_call(const Term& t, const std::string& fn);
/** True iff the term contains any Call node. */
bool contains_any_call(const Term& t);

}  // namespace minisy

#endif
