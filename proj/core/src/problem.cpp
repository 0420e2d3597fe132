#include "minisy/problem.hpp"

#include <unordered_set>

namespace minisy {

Term Problem::conjoined_constraints() const {
  if (constraints.empty()) return Term::true_term();
  if (constraints.size() == 1) return constraints[0];
  return Term::apply(Op::And, constraints);
}

namespace {

void collect_literals(const Term& t, std::vector<Value>& out,
                      std::unordered_set<Term, TermHash>& seen) {
  if (!seen.insert(t).second) return;
  if (t.is_constant()) {
    const Value& v = t.value();
    for (const auto& have : out) {
      if (have == v) return;
    }
    out.push_back(v);
    return;
  }
  for (size_t i = 0; i < t.arity(); ++i) collect_literals(t.child(i), out, seen);
}

}  // namespace

std::vector<Value> literal_pool(const Problem& p) {
  std::vector<Value> out;
  std::unordered_set<Term, TermHash> seen;
  for (const auto& c : p.constraints) collect_literals(c, out, seen);
  for (const auto& f : p.functions) {
    if (!f.grammar) continue;
    for (const auto& rule : f.grammar->rules) {
      for (const auto& prod : rule.productions) {
        collect_literals(prod, out, seen);
      }
    }
  }
  return out;
}

}  // namespace minisy
