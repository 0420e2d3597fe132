#include "minisy/single_invocation.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "minisy/eval.hpp"
#include "minisy/lia.hpp"
#include "minisy/linear.hpp"
#include "minisy/rewriter.hpp"
#include "minisy/verifier.hpp"

namespace minisy {

namespace {

void collect_calls(const Term& t, const std::string& fn,
                   std::set<Term>& found) {
  if (t.is_call() && t.name() == fn) found.insert(t);
  for (const Term& c : t.children()) collect_calls(c, fn, found);
}

bool contains_var(const Term& t, const Term& v) {
  if (t == v) return true;
  for (const Term& c : t.children()) {
    if (contains_var(c, v)) return true;
  }
  return false;
}

bool is_connective(const Term& t) {
  if (!t.is_apply()) return false;
  switch (t.op()) {
    case Op::And:
    case Op::Or:
    case Op::Not:
    case Op::Implies:
      return true;
    case Op::Ite:
      return t.sort().is_bool();
    case Op::Eq:
      return t.child(0).sort().is_bool();
    default:
      return false;
  }
}

void collect_atoms(const Term& t, std::vector<Term>& atoms) {
  if (is_connective(t)) {
    if (t.is_apply(Op::Not)) {
      const Term& a = t.child(0);
      if (!is_connective(a)) {
        atoms.push_back(t);
        return;
      }
    }
    for (const Term& c : t.children()) collect_atoms(c, atoms);
    return;
  }
  atoms.push_back(t);
}

Value model_value(const Environment& m, const Term& v) {
  if (const Value* x = m.lookup(v.name())) return *x;
  if (v.sort().is_int()) return Value(Integer(0));
  return Value(false);
}

}  // namespace

std::optional<SiProblem> detect_single_invocation(const Problem& p,
                                                  const SynthFun& f) {
  Term phi = p.conjoined_constraints();
  std::set<Term> calls;
  collect_calls(phi, f.name, calls);
  if (calls.size() != 1) return std::nullopt;

  Term call = *calls.begin();
  std::vector<Term> args(call.children().begin(), call.children().end());
  std::unordered_set<std::string> arg_names;
  for (const Term& a : args) {
    if (!a.is_variable()) return std::nullopt;
    if (!arg_names.insert(a.name()).second) return std::nullopt;
  }
  for (const Term& v : free_variables(phi)) {
    if (!arg_names.count(v.name())) return std::nullopt;
  }

  Term out = Term::variable("!out", f.ret);
  return SiProblem{std::move(args), out, replace_subterm(phi, call, out)};
}

SingleInvocationEngine::SingleInvocationEngine(const Problem& p,
                                               const SynthFun& f,
                                               const DatatypeGrammar& g,
                                               SiConfig cfg)
    : d_prob(p), d_fun(f), d_grammar(g), d_cfg(cfg) {}

std::optional<Term> SingleInvocationEngine::select_term(
    const SiProblem& si, const Environment& m, bool& proved_infeasible) {
  proved_infeasible = false;

  Environment point;
  std::unordered_map<Term, Term, TermHash> plug;
  for (const Term& a : si.args) {
    Value v = model_value(m, a);
    point.bind(a.name(), v);
    plug.emplace(a, Term::constant(v));
  }

  Term phi_at_point = substitute(si.phi, plug);
  LiaResult feas = qf_lia_sat(phi_at_point);
  if (feas.unsat()) {
    proved_infeasible = true;
    return std::nullopt;
  }
  if (!feas.sat()) return std::nullopt;
  Value fallback = model_value(feas.model, si.output);

  auto satisfied_by = [&](const Term& cand) {
    Term inst = replace_subterm(si.phi, si.output, cand);
    try {
      return evaluate(inst, point).as_bool();
    } catch (const EvalError&) {
      return false;
    }
  };

  std::vector<Term> candidates;
  if (si.output.sort().is_bool()) {
    candidates.push_back(Term::true_term());
    candidates.push_back(Term::false_term());
  } else {
    std::vector<std::pair<Integer, Term>> lowers, uppers;
    std::vector<Term> eqs, offsets;
    std::vector<Term> atoms;
    collect_atoms(rewrite(si.phi), atoms);
    for (const Term& a : atoms) {
      if (!contains_var(a, si.output)) continue;
      bool negated = a.is_apply(Op::Not);
      Term core = negated ? a.child(0) : a;
      if (!core.is_apply() || core.arity() != 2) continue;
      if (core.op() != Op::Le && core.op() != Op::Eq) continue;
      if (!core.child(0).sort().is_int()) continue;
      LinearPoly poly = linear_decompose(core.child(0));
      poly -= linear_decompose(core.child(1));
      auto it = poly.coeffs.find(si.output);
      if (it == poly.coeffs.end()) continue;
      Integer a_coef = it->second;
      if (a_coef != 1 && a_coef != -1) continue;
      LinearPoly rest = poly;
      rest.coeffs.erase(si.output);
      rest.scale(-a_coef);
      Term bound = linear_emit(rest);
      try {
        Integer val = evaluate(bound, point).as_int();
        if (core.op() == Op::Eq && !negated) {
          eqs.push_back(bound);
        } else if (core.op() == Op::Eq) {
          offsets.push_back(
              Term::apply(Op::Add, {bound, Term::int_const(1)}));
          offsets.push_back(
              Term::apply(Op::Sub, {bound, Term::int_const(1)}));
        } else if (a_coef > 0) {
          uppers.emplace_back(val, bound);
        } else {
          lowers.emplace_back(val, bound);
        }
      } catch (const EvalError&) {
      }
    }
    std::stable_sort(lowers.begin(), lowers.end(),
                     [](const auto& x, const auto& y) {
                       return x.first > y.first;
                     });
    std::stable_sort(uppers.begin(), uppers.end(),
                     [](const auto& x, const auto& y) {
                       return x.first < y.first;
                     });
    for (auto& [v, t] : lowers) candidates.push_back(t);
    for (auto& t : eqs) candidates.push_back(t);
    for (auto& [v, t] : uppers) candidates.push_back(t);
    for (auto& t : offsets) candidates.push_back(t);
    candidates.push_back(Term::int_const(0));
    candidates.push_back(Term::int_const(1));
  }
  candidates.push_back(Term::constant(fallback));

  for (const Term& cand : candidates) {
    Term simplified = rewrite(cand);
    if (satisfied_by(simplified)) return simplified;
  }
  return std::nullopt;
}

Term SingleInvocationEngine::assemble(const SiProblem& si,
                                      const std::vector<Term>& basis) const {
  Term body = basis.back();
  for (size_t i = basis.size() - 1; i-- > 0;) {
    Term guard = rewrite(replace_subterm(si.phi, si.output, basis[i]));
    body = Term::apply(Op::Ite, {guard, basis[i], body});
  }
  std::unordered_map<Term, Term, TermHash> rename;
  for (size_t i = 0; i < si.args.size(); ++i) {
    rename.emplace(si.args[i], d_fun.params[i]);
  }
  return rewrite(substitute(body, rename));
}

SolveOutcome SingleInvocationEngine::solve() {
  auto si_opt = detect_single_invocation(d_prob, d_fun);
  if (!si_opt) return SolveOutcome::unknown("not single-invocation");
  const SiProblem& si = *si_opt;
  if (!si.output.sort().is_int() && !si.output.sort().is_bool()) {
    return SolveOutcome::unknown("unsupported output sort");
  }

  std::vector<Term> basis;
  for (int round = 0; round < d_cfg.max_rounds; ++round) {
    d_stats.rounds = round + 1;
    std::vector<Term> conjuncts;
    conjuncts.reserve(basis.size());
    for (const Term& t : basis) {
      conjuncts.push_back(Term::apply(
          Op::Not, {replace_subterm(si.phi, si.output, t)}));
    }
    Term query = conjuncts.empty() ? Term::true_term()
                 : conjuncts.size() == 1
                     ? conjuncts[0]
                     : Term::apply(Op::And, conjuncts);
    LiaResult r = qf_lia_sat(query);
    if (r.unsat()) {
      d_stats.basis_terms = basis.size();
      Term body = assemble(si, basis);
      if (d_grammar.from_explicit_spec()) {
        if (!grammar_derivable(d_grammar, body, d_grammar.start())) {
          return SolveOutcome::unknown("solution outside grammar");
        }
        d_stats.reconstructed = true;
      }
      Verifier v(d_prob, d_cfg.verifier);
      std::unordered_map<std::string, Term> bodies;
      bodies.emplace(d_fun.name, body);
      if (!v.check(bodies).valid()) {
        return SolveOutcome::unknown("assembled solution failed checking");
      }
      return SolveOutcome::solution(body);
    }
    if (!r.sat()) {
      return SolveOutcome::unknown("instantiation query unresolved: " +
                                   r.reason);
    }
    bool infeasible = false;
    auto t = select_term(si, r.model, infeasible);
    if (infeasible) return SolveOutcome::infeasible();
    if (!t) return SolveOutcome::unknown("no usable instantiation term");
    basis.push_back(*t);
  }
  return SolveOutcome::unknown("instantiation round budget exhausted");
}

}  // namespace minisy
