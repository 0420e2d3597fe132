#include "minisy/invariant.hpp"

#include <chrono>
#include <map>
#include <set>
#include <unordered_map>

#include "minisy/enumerator.hpp"
#include "minisy/eval.hpp"
#include "minisy/rewriter.hpp"
#include "minisy/verifier.hpp"

namespace minisy {

namespace {

using Clock = std::chrono::steady_clock;

Value default_value(const Sort& s) {
  if (s.is_int()) return Value(Integer(0));
  if (s.is_bool()) return Value(false);
  if (s.is_string()) return Value(CodePoints());
  return Value(BitVec(s.bv_width(), 0));
}

Term conjoin(const std::vector<Term>& cs) {
  if (cs.empty()) return Term::true_term();
  Term body = cs.back();
  for (size_t i = cs.size() - 1; i-- > 0;) {
    body = Term::apply(Op::And, {cs[i], body});
  }
  return body;
}

}  // namespace

SolveOutcome InvariantEngine::solve() {
  if (!d_prob.is_invariant) {
    return SolveOutcome::unknown("not an invariant conjecture");
  }
  const auto& params = d_fun.params;
  const auto& state_vars = d_prob.inv_state_vars;
  const auto& primed_vars = d_prob.inv_primed_vars;
  const size_t n = params.size();
  auto deadline = Clock::now() + std::chrono::milliseconds(d_cfg.timeout_ms);

  // Reference terms identifying which of the three conditions a failed
  // constraint is, recognizable because constraints are hash-consed.
  Term inv_now =
      Term::call(d_fun.name, Sort::bool_sort(), state_vars);
  Term inv_next =
      Term::call(d_fun.name, Sort::bool_sort(), primed_vars);
  Term t_init = Term::apply(Op::Implies, {d_prob.inv_pre, inv_now});
  Term t_cons = Term::apply(
      Op::Implies,
      {Term::apply(Op::And, {inv_now, d_prob.inv_trans}), inv_next});
  Term t_safe = Term::apply(Op::Implies, {inv_now, d_prob.inv_post});

  auto state_env = [&](const Environment& cex,
                       const std::vector<Term>& from) {
    Environment env;
    for (size_t i = 0; i < n; ++i) {
      const Value* v = cex.lookup(from[i].name());
      env.bind(params[i].name(), v ? *v : default_value(params[i].sort()));
    }
    return env;
  };

  std::map<std::string, Environment> must_in, must_out;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, Environment> pair_states;
  std::set<std::pair<std::string, std::string>> pair_seen;

  auto add_in = [&](const Environment& e) {
    return must_in.emplace(e.str(), e).second;
  };
  auto add_out = [&](const Environment& e) {
    return must_out.emplace(e.str(), e).second;
  };
  auto add_pair = [&](const Environment& a, const Environment& b) {
    auto key = std::make_pair(a.str(), b.str());
    if (!pair_seen.insert(key).second) return false;
    pair_states.emplace(key.first, a);
    pair_states.emplace(key.second, b);
    pairs.push_back(key);
    return true;
  };

  // Labels flow along stored transition pairs; a state required on both
  // sides means no invariant at all can exist.
  auto propagate = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, b] : pairs) {
        if (must_in.count(a) && !must_in.count(b)) {
          must_in.emplace(b, pair_states.at(b));
          changed = true;
        }
        if (must_out.count(b) && !must_out.count(a)) {
          must_out.emplace(a, pair_states.at(a));
          changed = true;
        }
      }
    }
    for (const auto& [k, e] : must_in) {
      if (must_out.count(k)) return true;
    }
    return false;
  };

  auto holds = [&](const Term& t, const Environment& env) {
    try {
      return evaluate(t, env).as_bool();
    } catch (const EvalError&) {
      return false;
    }
  };

  Enumerator en(d_grammar, params,
                EnumeratorConfig{d_cfg.max_size, d_cfg.seed});
  std::vector<Term> pool;
  bool pool_drained = false;
  auto grow_pool = [&]() {
    size_t added = 0;
    while (added < d_cfg.per_round && pool.size() < d_cfg.max_pool) {
      auto opt = en.next();
      if (!opt) {
        pool_drained = true;
        break;
      }
      if (has_holes(*opt)) continue;
      pool.push_back(unembed(*opt));
      ++added;
    }
    d_stats.pool = pool.size();
    return added;
  };
  grow_pool();

  bool has_and = false;
  for (const Constructor& c :
       d_grammar.nt(d_grammar.start()).constructors) {
    if (c.analog.is_apply(Op::And)) has_and = true;
  }

  std::vector<Term> conjuncts;
  std::vector<int> conjunct_src;  // pool index, or -1 for the seed
  std::set<int> blacklist;
  std::set<int> in_use;

  if (has_and) {
    std::unordered_map<Term, Term, TermHash> to_params;
    for (size_t i = 0; i < n; ++i) {
      to_params.emplace(state_vars[i], params[i]);
    }
    Term seed = rewrite(substitute(d_prob.inv_post, to_params));
    if (!d_grammar.from_explicit_spec() ||
        grammar_derivable(d_grammar, seed, d_grammar.start())) {
      conjuncts.push_back(seed);
      conjunct_src.push_back(-1);
    }
  }

  auto keeps_all_in = [&](const Term& p) {
    for (const auto& [k, e] : must_in) {
      if (!holds(p, e)) return false;
    }
    return true;
  };
  auto candidate_holds = [&](const Environment& e) {
    for (const Term& c : conjuncts) {
      if (!holds(c, e)) return false;
    }
    return true;
  };

  Verifier verifier(d_prob, d_cfg.verifier);

  for (int round = 0; round < d_cfg.max_rounds; ++round) {
    d_stats.rounds = round + 1;
    if (Clock::now() >= deadline) return SolveOutcome::unknown("timeout");
    bool progress = false;

    // Drop conjuncts contradicted by states that must be inside.
    for (size_t i = 0; i < conjuncts.size();) {
      if (!keeps_all_in(conjuncts[i])) {
        if (conjunct_src[i] >= 0) {
          blacklist.insert(conjunct_src[i]);
          in_use.erase(conjunct_src[i]);
        }
        conjuncts.erase(conjuncts.begin() + long(i));
        conjunct_src.erase(conjunct_src.begin() + long(i));
        progress = true;
      } else {
        ++i;
      }
    }

    auto find_excluding = [&](const Environment& bad) {
      for (size_t j = 0; j < pool.size(); ++j) {
        int idx = int(j);
        if (blacklist.count(idx) || in_use.count(idx)) continue;
        if (holds(pool[j], bad)) continue;
        if (!keeps_all_in(pool[j])) {
          blacklist.insert(idx);
          continue;
        }
        return idx;
      }
      return -1;
    };

    auto exclude = [&](const Environment& bad) {
      while (true) {
        int idx = find_excluding(bad);
        if (idx >= 0) {
          conjuncts.push_back(pool[size_t(idx)]);
          conjunct_src.push_back(idx);
          in_use.insert(idx);
          return true;
        }
        if (pool_drained || grow_pool() == 0) return false;
      }
    };

    if (has_and) {
      for (const auto& [k, e] : must_out) {
        if (!candidate_holds(e)) continue;
        if (exclude(e)) {
          progress = true;
        }
      }
      for (const auto& [ka, kb] : pairs) {
        const Environment& a = pair_states.at(ka);
        const Environment& b = pair_states.at(kb);
        if (candidate_holds(a) && !candidate_holds(b)) {
          if (exclude(a)) progress = true;
        }
      }
    } else {
      // Single-predicate grammars: scan for one consistent with all labels.
      conjuncts.clear();
      conjunct_src.clear();
      in_use.clear();
      while (true) {
        int found = -1;
        for (size_t j = 0; j < pool.size(); ++j) {
          int idx = int(j);
          if (blacklist.count(idx)) continue;
          const Term& p = pool[j];
          if (!keeps_all_in(p)) continue;
          bool ok = true;
          for (const auto& [k, e] : must_out) {
            if (holds(p, e)) {
              ok = false;
              break;
            }
          }
          for (const auto& [ka, kb] : pairs) {
            if (!ok) break;
            if (holds(p, pair_states.at(ka)) &&
                !holds(p, pair_states.at(kb))) {
              ok = false;
            }
          }
          if (ok) {
            found = idx;
            break;
          }
        }
        if (found >= 0) {
          conjuncts.push_back(pool[size_t(found)]);
          conjunct_src.push_back(found);
          in_use.insert(found);
          break;
        }
        if (pool_drained || grow_pool() == 0) break;
      }
      if (conjuncts.empty()) {
        return SolveOutcome::unknown("no consistent predicate in grammar");
      }
    }

    Term body = conjoin(conjuncts);
    std::unordered_map<std::string, Term> bodies;
    bodies.emplace(d_fun.name, body);
    VerifyResult res = verifier.check(bodies);
    if (res.valid()) return SolveOutcome::solution(body);
    if (!res.refuted()) {
      return SolveOutcome::unknown("verification inconclusive: " +
                                   res.reason);
    }

    const Environment& cex = res.counterexample;
    for (const Term& c : d_prob.constraints) {
      Term inst = reduce_call(c, d_fun.name, params, body);
      if (holds(inst, cex)) continue;
      if (c == t_init) {
        if (add_in(state_env(cex, state_vars))) progress = true;
      } else if (c == t_cons) {
        if (add_pair(state_env(cex, state_vars),
                     state_env(cex, primed_vars))) {
          progress = true;
        }
      } else if (c == t_safe) {
        if (add_out(state_env(cex, state_vars))) progress = true;
      }
    }
    if (propagate()) return SolveOutcome::infeasible();
    d_stats.must_in = must_in.size();
    d_stats.must_out = must_out.size();
    d_stats.pairs = pairs.size();
    if (!progress) {
      if (grow_pool() == 0) {
        return SolveOutcome::unknown("strengthening stalled");
      }
    }
  }
  return SolveOutcome::unknown("round budget exhausted");
}

InvariantEngine::InvariantEngine(const Problem& p, const SynthFun& f,
                                 const DatatypeGrammar& g,
                                 InvariantConfig cfg)
    : d_prob(p), d_fun(f), d_grammar(g), d_cfg(cfg) {}

}  // namespace minisy
