#include "minisy/verifier.hpp"

#include <algorithm>

#include "minisy/rewriter.hpp"

namespace minisy {

namespace {

/** First integer-sorted ite lying under this (non-connective) term. */
Term find_int_ite(const Term& t) {
  if (t.is_apply(Op::Ite) && t.sort().is_int()) return t;
  for (size_t i = 0; i < t.arity(); ++i) {
    Term found = find_int_ite(t.child(i));
    if (!found.is_null()) return found;
  }
  return Term();
}

bool is_connective(const Term& t) {
  if (!t.is_apply() || !t.sort().is_bool()) return false;
  switch (t.op()) {
    case Op::And:
    case Op::Or:
    case Op::Not:
    case Op::Implies:
      return true;
    case Op::Ite:
      return true;  // branches are Bool here
    case Op::Eq:
      return t.child(0).sort().is_bool();
    default:
      return false;
  }
}

}  // namespace

Term lift_int_ites(const Term& formula) {
  if (is_connective(formula)) {
    std::vector<Term> ch;
    ch.reserve(formula.arity());
    for (size_t i = 0; i < formula.arity(); ++i) {
      ch.push_back(lift_int_ites(formula.child(i)));
    }
    return Term::apply(formula.op(), ch);
  }
  Term ite = find_int_ite(formula);
  if (ite.is_null()) return formula;
  Term cond = ite.child(0);
  Term then_atom = lift_int_ites(replace_subterm(formula, ite, ite.child(1)));
  Term else_atom = lift_int_ites(replace_subterm(formula, ite, ite.child(2)));
  // The condition may itself hide integer conditionals in its atoms.
  Term lifted_cond = lift_int_ites(cond);
  return Term::apply(
      Op::Or,
      {Term::apply(Op::And, {lifted_cond, then_atom}),
       Term::apply(Op::And, {Term::apply(Op::Not, {lifted_cond}), else_atom})});
}

Verifier::Verifier(const Problem& p, VerifierConfig cfg)
    : d_prob(p), d_cfg(cfg) {}

Term Verifier::instantiate(
    const std::unordered_map<std::string, Term>& bodies) const {
  Term f = d_prob.conjoined_constraints();
  for (const auto& fun : d_prob.functions) {
    auto it = bodies.find(fun.name);
    if (it == bodies.end()) continue;
    f = reduce_call(f, fun.name, fun.params, it->second);
  }
  return f;
}

VerifyResult Verifier::check(
    const std::unordered_map<std::string, Term>& bodies) {
  ++d_calls;
  Term f = instantiate(bodies);
  if (contains_any_call(f)) {
    return {VerifyStatus::Unknown, {}, false, "unreduced calls remain"};
  }

  if (d_prob.universal_vars.empty()) {
    Environment empty;
    bool ok = evaluate(f, empty).as_bool();
    if (ok) return {VerifyStatus::Valid, {}, true, ""};
    return {VerifyStatus::CounterexampleFound, std::move(empty), true, ""};
  }

  Term simplified = rewrite(f);
  if (simplified.is_constant()) {
    if (simplified.value().as_bool()) return {VerifyStatus::Valid, {}, true, ""};
    Environment cex;
    for (const auto& v : d_prob.universal_vars) {
      if (v.sort().is_int()) {
        cex.bind(v.name(), Value::of_int(0));
      } else if (v.sort().is_bool()) {
        cex.bind(v.name(), Value(false));
      } else if (v.sort().is_string()) {
        cex.bind(v.name(), Value(CodePoints{}));
      } else {
        cex.bind(v.name(), Value(BitVec(v.sort().bv_width(), 0)));
      }
    }
    return {VerifyStatus::CounterexampleFound, std::move(cex), true, ""};
  }

  bool arithmetic_only = true;
  for (const auto& v : d_prob.universal_vars) {
    if (!v.sort().is_int() && !v.sort().is_bool()) arithmetic_only = false;
  }
  if (arithmetic_only) {
    Term negated = Term::apply(Op::Not, {lift_int_ites(simplified)});
    LiaResult r = qf_lia_sat(negated);
    if (r.unsat()) return {VerifyStatus::Valid, {}, true, ""};
    if (r.sat()) {
      Environment cex;
      for (const auto& v : d_prob.universal_vars) {
        const Value* bound = r.model.lookup(v.name());
        if (bound) {
          cex.bind(v.name(), *bound);
        } else {
          cex.bind(v.name(), v.sort().is_int() ? Value::of_int(0)
                                               : Value(false));
        }
      }
      if (!evaluate(f, cex).as_bool()) {
        return {VerifyStatus::CounterexampleFound, std::move(cex), true, ""};
      }
      return {VerifyStatus::Unknown, {}, false, "spurious counterexample"};
    }
  }
  return bounded_search(f);
}

VerifyResult Verifier::bounded_search(const Term& formula) {
  // Alphabet for string domains: characters of the problem's literals
  // plus one fresh character.
  std::vector<char32_t> alphabet;
  for (const auto& v : literal_pool(d_prob)) {
    if (!v.is_string()) continue;
    for (char32_t c : v.as_string()) {
      if (std::find(alphabet.begin(), alphabet.end(), c) == alphabet.end()) {
        alphabet.push_back(c);
      }
    }
  }
  std::sort(alphabet.begin(), alphabet.end());
  for (char32_t fresh = U'a';; ++fresh) {
    if (std::find(alphabet.begin(), alphabet.end(), fresh) ==
        alphabet.end()) {
      alphabet.push_back(fresh);
      break;
    }
  }

  bool full_coverage = true;
  std::vector<std::vector<Value>> domains;
  for (const auto& v : d_prob.universal_vars) {
    std::vector<Value> dom;
    const Sort& s = v.sort();
    if (s.is_bool()) {
      dom.emplace_back(false);
      dom.emplace_back(true);
    } else if (s.is_int()) {
      full_coverage = false;
      for (long long k = -d_cfg.int_bound; k <= d_cfg.int_bound; ++k) {
        dom.push_back(Value(Integer(k)));
      }
      for (const auto& lit : literal_pool(d_prob)) {
        if (!lit.is_int()) continue;
        for (long d : {-1L, 0L, 1L}) {
          Value cand(lit.as_int() + d);
          if (std::find(dom.begin(), dom.end(), cand) == dom.end()) {
            dom.push_back(cand);
          }
        }
      }
    } else if (s.is_string()) {
      full_coverage = false;
      std::vector<CodePoints> frontier{CodePoints{}};
      dom.push_back(Value(CodePoints{}));
      for (size_t len = 1; len <= d_cfg.max_string_len; ++len) {
        std::vector<CodePoints> next;
        for (const auto& base : frontier) {
          for (char32_t c : alphabet) {
            CodePoints w = base;
            w.push_back(c);
            next.push_back(w);
            dom.push_back(Value(w));
          }
        }
        frontier = std::move(next);
        if (dom.size() > d_cfg.max_points) break;
      }
    } else {
      uint32_t w = s.bv_width();
      if (w <= 8) {
        for (Integer bits = 0; bits < (Integer(1) << w); ++bits) {
          dom.push_back(Value(BitVec(w, bits)));
        }
      } else {
        full_coverage = false;
        for (Integer bits : {Integer(0), Integer(1), Integer(2),
                             (Integer(1) << w) - 1, Integer(1) << (w - 1)}) {
          dom.push_back(Value(BitVec(w, bits)));
        }
      }
    }
    domains.push_back(std::move(dom));
  }

  uint64_t total = 1;
  for (const auto& dom : domains) {
    total *= dom.size();
    if (total > d_cfg.max_points) {
      full_coverage = false;
      break;
    }
  }

  std::vector<size_t> idx(domains.size(), 0);
  uint64_t visited = 0;
  while (true) {
    Environment env;
    for (size_t i = 0; i < domains.size(); ++i) {
      env.bind(d_prob.universal_vars[i].name(), domains[i][idx[i]]);
    }
    if (!evaluate(formula, env).as_bool()) {
      return {VerifyStatus::CounterexampleFound, std::move(env), true, ""};
    }
    size_t i = domains.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (++idx[i] < domains[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
    if (++visited >= d_cfg.max_points) {
      full_coverage = false;
      break;
    }
  }
  if (full_coverage) return {VerifyStatus::Valid, {}, true, ""};
  return {VerifyStatus::Unknown, {}, false,
          "bounded search found no counterexample"};
}

}  // namespace minisy
