#include "minisy/pbe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "minisy/enumerator.hpp"
#include "minisy/eval.hpp"
#include "minisy/verifier.hpp"

namespace minisy {

namespace {

using Clock = std::chrono::steady_clock;

std::optional<PbeExample> example_of(const Term& c, const SynthFun& f) {
  Term call, result;
  if (c.is_apply(Op::Eq)) {
    Term a = c.child(0), b = c.child(1);
    if (a.is_call() && a.name() == f.name && b.is_constant()) {
      call = a;
      result = b;
    } else if (b.is_call() && b.name() == f.name && a.is_constant()) {
      call = b;
      result = a;
    } else {
      return std::nullopt;
    }
  } else if (c.is_call() && c.name() == f.name && c.sort().is_bool()) {
    call = c;
    result = Term::true_term();
  } else if (c.is_apply(Op::Not) && c.child(0).is_call() &&
             c.child(0).name() == f.name) {
    call = c.child(0);
    result = Term::false_term();
  } else {
    return std::nullopt;
  }

  PbeExample ex;
  for (const Term& arg : call.children()) {
    if (!arg.is_constant()) return std::nullopt;
    ex.inputs.push_back(arg.value());
  }
  ex.output = result.value();
  return ex;
}

std::string value_row_key(const std::vector<Value>& row) {
  std::string key;
  for (const Value& v : row) {
    key += v.str();
    key += '|';
  }
  return key;
}

double entropy(const std::map<int, size_t>& counts, size_t total) {
  double h = 0.0;
  for (const auto& [label, n] : counts) {
    double p = double(n) / double(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::optional<std::vector<PbeExample>> extract_pbe(const Problem& p,
                                                   const SynthFun& f) {
  std::vector<PbeExample> out;
  std::unordered_set<std::string> seen;
  for (const Term& c : p.constraints) {
    auto ex = example_of(c, f);
    if (!ex) return std::nullopt;
    std::string key = value_row_key(ex->inputs);
    key += "=>";
    key += ex->output.str();
    if (seen.insert(key).second) out.push_back(std::move(*ex));
  }
  return out;
}

PbeEngine::PbeEngine(const Problem& p, const SynthFun& f,
                     const DatatypeGrammar& g, PbeConfig cfg)
    : d_prob(p), d_fun(f), d_grammar(g), d_cfg(cfg) {}

SolveOutcome PbeEngine::solve() {
  auto ex_opt = extract_pbe(d_prob, d_fun);
  if (!ex_opt) return SolveOutcome::unknown("not an example problem");
  std::vector<PbeExample> examples = *ex_opt;

  {
    std::unordered_map<std::string, Value> by_input;
    for (const auto& ex : examples) {
      auto [it, fresh] = by_input.emplace(value_row_key(ex.inputs), ex.output);
      if (!fresh && !(it->second == ex.output)) {
        return SolveOutcome::infeasible();
      }
    }
  }

  std::vector<Environment> envs;
  for (const auto& ex : examples) {
    Environment env;
    for (size_t i = 0; i < d_fun.params.size(); ++i) {
      env.bind(d_fun.params[i].name(), ex.inputs[i]);
    }
    envs.push_back(std::move(env));
  }
  const size_t n = examples.size();

  Verifier verifier(d_prob, d_cfg.verifier);
  auto finish = [&](const Term& body, bool dt, bool split) -> SolveOutcome {
    std::unordered_map<std::string, Term> bodies;
    bodies.emplace(d_fun.name, body);
    if (!verifier.check(bodies).valid()) {
      return SolveOutcome::unknown("assembled program failed checking");
    }
    d_stats.used_decision_tree = dt;
    d_stats.used_concat_split = split;
    return SolveOutcome::solution(body);
  };

  Enumerator en(d_grammar, d_fun.params,
                EnumeratorConfig{d_cfg.max_size, d_cfg.seed});

  int cond_nt = -1;
  for (const Constructor& c : d_grammar.nt(d_grammar.start()).constructors) {
    if (c.analog.is_apply(Op::Ite)) {
      cond_nt = c.child_nts[0];
      break;
    }
  }

  std::vector<Term> terms;
  std::vector<std::vector<Value>> term_outs;
  std::unordered_map<std::string, int> out_index;
  std::vector<std::vector<int>> covers(n);

  std::vector<Term> conds;
  std::vector<std::vector<bool>> cond_vals;
  std::unordered_set<std::string> cond_seen;
  int conds_harvested_level = 0;

  const bool want_string_split =
      n > 0 && examples[0].output.is_string() && !d_fun.params.empty();

  auto outputs_of = [&](const EmbeddedRef& e,
                        std::vector<Value>& row) -> bool {
    row.clear();
    row.reserve(n);
    try {
      for (const auto& env : envs) row.push_back(eval_embedded(e, env));
    } catch (const EvalError&) {
      return false;
    }
    return true;
  };

  auto deadline = Clock::now() + std::chrono::milliseconds(d_cfg.timeout_ms);

  while (true) {
    ++d_stats.rounds;
    if (Clock::now() >= deadline) return SolveOutcome::unknown("timeout");

    bool drained = false;
    for (size_t pulled = 0; pulled < d_cfg.per_round; ++pulled) {
      auto opt = en.next();
      if (!opt) {
        drained = true;
        break;
      }
      const EmbeddedRef& e = *opt;
      if (has_holes(e)) continue;
      std::vector<Value> row;
      if (!outputs_of(e, row)) continue;
      std::string key = value_row_key(row);
      if (out_index.count(key)) continue;

      bool full = true;
      for (size_t i = 0; i < n; ++i) {
        if (!(row[i] == examples[i].output)) {
          full = false;
          break;
        }
      }
      Term t = unembed(e);
      if (full) return finish(t, false, false);

      int idx = int(terms.size());
      out_index.emplace(key, idx);
      terms.push_back(t);
      for (size_t i = 0; i < n; ++i) {
        if (row[i] == examples[i].output) covers[i].push_back(idx);
      }
      term_outs.push_back(std::move(row));

      if (terms.size() > d_cfg.max_pool) {
        return SolveOutcome::unknown("candidate pool budget exhausted");
      }
    }
    d_stats.terms = terms.size();

    if (want_string_split) {
      for (size_t ti = 0; ti < terms.size(); ++ti) {
        const auto& outs = term_outs[ti];
        std::vector<Value> suffixes;
        suffixes.reserve(n);
        bool ok = true;
        for (size_t i = 0; i < n; ++i) {
          const CodePoints& pre = outs[i].as_string();
          const CodePoints& full = examples[i].output.as_string();
          if (pre.empty() || pre.size() >= full.size() ||
              full.compare(0, pre.size(), pre) != 0) {
            ok = false;
            break;
          }
          suffixes.push_back(Value(full.substr(pre.size())));
        }
        if (!ok) continue;
        auto it = out_index.find(value_row_key(suffixes));
        if (it == out_index.end()) continue;
        Term body =
            Term::apply(Op::StrConcat, {terms[ti], terms[it->second]});
        return finish(body, false, true);
      }
    }

    if (cond_nt >= 0) {
      for (int k = conds_harvested_level + 1; k <= en.built_levels(); ++k) {
        for (const EmbeddedRef& e : en.level_pool(cond_nt, k)) {
          if (has_holes(e)) continue;
          std::vector<Value> row;
          if (!outputs_of(e, row)) continue;
          std::string key = value_row_key(row);
          if (!cond_seen.insert(key).second) continue;
          bool any_t = false, any_f = false;
          std::vector<bool> bits(n);
          for (size_t i = 0; i < n; ++i) {
            bits[i] = row[i].as_bool();
            (bits[i] ? any_t : any_f) = true;
          }
          if (!any_t || !any_f) continue;
          conds.push_back(unembed(e));
          cond_vals.push_back(std::move(bits));
        }
      }
      conds_harvested_level = en.built_levels();
      d_stats.conditions = conds.size();

      bool all_covered = n > 0;
      for (size_t i = 0; i < n; ++i) {
        if (covers[i].empty()) {
          all_covered = false;
          break;
        }
      }
      if (all_covered && !conds.empty()) {
        std::function<std::optional<Term>(const std::vector<size_t>&, int)>
            build_dt = [&](const std::vector<size_t>& set,
                           int depth) -> std::optional<Term> {
          std::vector<int> common = covers[set[0]];
          for (size_t j = 1; j < set.size() && !common.empty(); ++j) {
            std::vector<int> next;
            std::set_intersection(common.begin(), common.end(),
                                  covers[set[j]].begin(),
                                  covers[set[j]].end(),
                                  std::back_inserter(next));
            common = std::move(next);
          }
          if (!common.empty()) return terms[common[0]];
          if (depth <= 0) return std::nullopt;

          std::map<int, size_t> all_counts;
          for (size_t i : set) ++all_counts[covers[i][0]];
          double h_all = entropy(all_counts, set.size());

          int best = -1;
          double best_gain = -1.0;
          for (size_t ci = 0; ci < conds.size(); ++ci) {
            std::map<int, size_t> ct, cf;
            size_t nt_ = 0, nf = 0;
            for (size_t i : set) {
              if (cond_vals[ci][i]) {
                ++ct[covers[i][0]];
                ++nt_;
              } else {
                ++cf[covers[i][0]];
                ++nf;
              }
            }
            if (nt_ == 0 || nf == 0) continue;
            double gain = h_all -
                          (double(nt_) / set.size()) * entropy(ct, nt_) -
                          (double(nf) / set.size()) * entropy(cf, nf);
            if (gain > best_gain + 1e-12) {
              best_gain = gain;
              best = int(ci);
            }
          }
          if (best < 0) return std::nullopt;

          std::vector<size_t> st, sf;
          for (size_t i : set) (cond_vals[best][i] ? st : sf).push_back(i);
          auto lt = build_dt(st, depth - 1);
          if (!lt) return std::nullopt;
          auto rt = build_dt(sf, depth - 1);
          if (!rt) return std::nullopt;
          return Term::apply(Op::Ite, {conds[best], *lt, *rt});
        };

        std::vector<size_t> all(n);
        for (size_t i = 0; i < n; ++i) all[i] = i;
        if (auto body = build_dt(all, d_cfg.max_dt_depth)) {
          return finish(*body, true, false);
        }
      }
    }

    if (drained) {
      if (en.exhausted_completely()) return SolveOutcome::infeasible();
      return SolveOutcome::unknown("term size cap reached");
    }
  }
}

}  // namespace minisy
