#include "minisy/enumerator.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "minisy/rewriter.hpp"

namespace minisy {

namespace {

uint64_t pack_triple(int nt, int ctor, size_t pos, int child_ctor) {
  return (((static_cast<uint64_t>(nt) * 1024 + ctor) * 8 + pos) * 1024) +
         child_ctor;
}

/** True when the analog is exactly op applied to the slot variables. */
bool pure_slot_application(const Constructor& c) {
  if (c.is_constant_slot || !c.analog.is_apply()) return false;
  if (c.analog.arity() != c.slots.size()) return false;
  for (size_t i = 0; i < c.slots.size(); ++i) {
    if (c.analog.child(i) != c.slots[i]) return false;
  }
  return true;
}

bool value_is_int_zero(const Value& v) { return v.is_int() && v.as_int() == 0; }

bool value_is_bv_zero(const Value& v) {
  return v.is_bitvec() && v.as_bitvec().bits == 0;
}

bool value_is_bv_ones(const Value& v) {
  if (!v.is_bitvec()) return false;
  const BitVec& bv = v.as_bitvec();
  return bv.bits == (Integer(1) << bv.width) - 1;
}

bool value_is_empty_string(const Value& v) {
  return v.is_string() && v.as_string().empty();
}

bool value_is_true(const Value& v) { return v.is_bool() && v.as_bool(); }
bool value_is_false(const Value& v) { return v.is_bool() && !v.as_bool(); }

/**
 * Does `parent(..., v at pos, ...)` collapse to the child at `other`?
 * Covers identity elements of each binary operator plus ite's condition.
 */
bool is_identity_child(Op op, size_t pos, const Value& v) {
  switch (op) {
    case Op::Add:
      return value_is_int_zero(v);
    case Op::Sub:
      return pos == 1 && value_is_int_zero(v);
    case Op::And:
    case Op::Eq:
      return value_is_true(v);
    case Op::Or:
      return value_is_false(v);
    case Op::Implies:
      return pos == 0 && value_is_true(v);
    case Op::StrConcat:
      return value_is_empty_string(v);
    case Op::BvAdd:
    case Op::BvOr:
    case Op::BvXor:
      return value_is_bv_zero(v);
    case Op::BvAnd:
      return value_is_bv_ones(v);
    case Op::BvSub:
    case Op::BvShl:
    case Op::BvLshr:
      return pos == 1 && value_is_bv_zero(v);
    default:
      return false;
  }
}

/** Which child survives when the value at pos is an identity element. */
size_t identity_survivor(Op op, size_t pos) {
  (void)op;
  return pos == 0 ? 1 : 0;
}

/**
 * If `parent(..., v at pos, ...)` is a fixed value regardless of the
 * other children, returns that value.
 */
std::optional<Value> absorbing_result(Op op, size_t pos, const Value& v) {
  switch (op) {
    case Op::And:
      if (value_is_false(v)) return Value(false);
      return std::nullopt;
    case Op::Or:
      if (value_is_true(v)) return Value(true);
      return std::nullopt;
    case Op::Implies:
      if (pos == 1 && value_is_true(v)) return Value(true);
      if (pos == 0 && value_is_false(v)) return Value(true);
      return std::nullopt;
    case Op::BvAnd:
      if (value_is_bv_zero(v)) return v;
      return std::nullopt;
    case Op::BvOr:
      if (value_is_bv_ones(v)) return v;
      return std::nullopt;
    case Op::BvShl:
    case Op::BvLshr:
      if (pos == 0 && value_is_bv_zero(v)) return v;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace

Enumerator::Enumerator(const DatatypeGrammar& g,
                       const std::vector<Term>& params, EnumeratorConfig cfg)
    : d_grammar(g), d_cfg(cfg), d_state(g.num_nonterminals()) {
  for (size_t i = 0; i < g.num_nonterminals(); ++i) {
    for (const auto& c : g.nt(i).constructors) {
      d_max_arity = std::max(d_max_arity, c.arity());
    }
    d_state[i].levels.resize(1);
  }
  build_sample_envs(params);
  derive_symmetry_rules();
}

void Enumerator::build_sample_envs(const std::vector<Term>& params) {
  // Literals occurring in the grammar enrich the sample domains.
  std::vector<Value> grammar_literals;
  auto add_literal = [&grammar_literals](const Value& v) {
    for (const auto& have : grammar_literals) {
      if (have == v) return;
    }
    grammar_literals.push_back(v);
  };
  std::function<void(const Term&)> scan = [&](const Term& t) {
    if (t.is_constant()) {
      add_literal(t.value());
      return;
    }
    for (size_t i = 0; i < t.arity(); ++i) scan(t.child(i));
  };
  for (size_t i = 0; i < d_grammar.num_nonterminals(); ++i) {
    for (const auto& c : d_grammar.nt(i).constructors) {
      if (!c.is_constant_slot) scan(c.analog);
    }
  }

  std::mt19937_64 rng(d_cfg.seed);
  auto candidates_for = [&](const Sort& s) {
    std::vector<Value> out;
    auto add = [&out](Value v) {
      for (const auto& have : out) {
        if (have == v) return;
      }
      out.push_back(std::move(v));
    };
    if (s.is_int()) {
      for (long k : {0L, 1L, -1L, 2L, -2L}) add(Value::of_int(k));
      for (const auto& v : grammar_literals) {
        if (v.is_int()) add(v);
      }
      for (int i = 0; i < 3; ++i) {
        add(Value(Integer(static_cast<long>(rng() % 101)) - 50));
      }
    } else if (s.is_bool()) {
      add(Value(false));
      add(Value(true));
    } else if (s.is_string()) {
      add(Value(CodePoints{}));
      add(Value::of_string("a"));
      add(Value::of_string("b"));
      add(Value::of_string("ab"));
      for (const auto& v : grammar_literals) {
        if (!v.is_string()) continue;
        add(v);
        if (v.as_string().size() > 1) {
          add(Value(CodePoints(1, v.as_string()[0])));
        }
      }
    } else {
      uint32_t w = s.bv_width();
      add(Value(BitVec(w, 0)));
      add(Value(BitVec(w, 1)));
      add(Value(BitVec(w, (Integer(1) << w) - 1)));
      for (int i = 0; i < 2; ++i) {
        add(Value(BitVec(w, Integer(rng() % (1u << std::min(w, 16u))))));
      }
    }
    return out;
  };

  std::vector<std::vector<Value>> cand;
  cand.reserve(params.size());
  size_t most = 1;
  for (const auto& p : params) {
    cand.push_back(candidates_for(p.sort()));
    most = std::max(most, cand.back().size());
  }

  std::vector<std::string> seen;
  auto push_env = [&](const Environment& env) {
    std::string key = env.str();
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    seen.push_back(std::move(key));
    d_envs.push_back(env);
  };
  if (params.empty()) {
    d_envs.emplace_back();
    return;
  }
  // Staggered sweeps decorrelate same-sort parameters; random draws fill
  // the rest of the budget.
  for (size_t t = 0; t < 2 * most && d_envs.size() < 24; ++t) {
    Environment env;
    for (size_t i = 0; i < params.size(); ++i) {
      env.bind(params[i].name(), cand[i][(t + i * 7919) % cand[i].size()]);
    }
    push_env(env);
  }
  for (int t = 0; t < 30 && d_envs.size() < 40; ++t) {
    Environment env;
    for (size_t i = 0; i < params.size(); ++i) {
      env.bind(params[i].name(), cand[i][rng() % cand[i].size()]);
    }
    push_env(env);
  }
}

void Enumerator::derive_symmetry_rules() {
  // Literal constructors per nonterminal, for identity/absorption checks.
  size_t n = d_grammar.num_nonterminals();
  std::vector<std::vector<std::pair<Value, int>>> literals(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& ctors = d_grammar.nt(i).constructors;
    for (size_t ci = 0; ci < ctors.size(); ++ci) {
      if (!ctors[ci].is_constant_slot && ctors[ci].analog.is_constant()) {
        literals[i].emplace_back(ctors[ci].analog.value(),
                                 static_cast<int>(ci));
      }
    }
  }
  auto nt_has_literal = [&literals](int nt, const Value& v) {
    for (const auto& [have, ci] : literals[nt]) {
      if (have == v) return true;
    }
    return false;
  };

  for (size_t i = 0; i < n; ++i) {
    const auto& ctors = d_grammar.nt(i).constructors;
    for (size_t ci = 0; ci < ctors.size(); ++ci) {
      const Constructor& c = ctors[ci];
      if (!pure_slot_application(c)) continue;
      Op op = c.analog.op();
      for (size_t pos = 0; pos < c.arity(); ++pos) {
        int child_nt = c.child_nts[pos];
        // ite collapses to a branch when its condition is a literal.
        if (op == Op::Ite && pos == 0) {
          size_t branch_true = 1;
          size_t branch_false = 2;
          for (const auto& [v, lit_ci] : literals[child_nt]) {
            if (!v.is_bool()) continue;
            size_t branch = v.as_bool() ? branch_true : branch_false;
            if (c.child_nts[branch] == static_cast<int>(i)) {
              d_forbidden.insert(pack_triple(static_cast<int>(i),
                                             static_cast<int>(ci), pos,
                                             lit_ci));
            }
          }
          continue;
        }
        if (c.arity() == 2) {
          size_t other = identity_survivor(op, pos);
          for (const auto& [v, lit_ci] : literals[child_nt]) {
            bool prune = false;
            if (is_identity_child(op, pos, v) &&
                c.child_nts[other] == static_cast<int>(i)) {
              prune = true;
            } else if (auto r = absorbing_result(op, pos, v)) {
              prune = nt_has_literal(static_cast<int>(i), *r);
            }
            if (prune) {
              d_forbidden.insert(pack_triple(static_cast<int>(i),
                                             static_cast<int>(ci), pos,
                                             lit_ci));
            }
          }
        }
        // Reassociation: keep the left-leaning nesting only.
        if (pos == 1 && op_is_associative(op)) {
          const auto& child_ctors = d_grammar.nt(child_nt).constructors;
          for (size_t cj = 0; cj < child_ctors.size(); ++cj) {
            if (pure_slot_application(child_ctors[cj]) &&
                child_ctors[cj].analog.op() == op) {
              d_forbidden.insert(pack_triple(static_cast<int>(i),
                                             static_cast<int>(ci), pos,
                                             static_cast<int>(cj)));
            }
          }
        }
      }
    }
  }
}

bool Enumerator::forbidden(int nt, int ctor, size_t pos,
                           int child_ctor) const {
  return d_forbidden.count(pack_triple(nt, ctor, pos, child_ctor)) > 0;
}

const std::vector<EmbeddedRef>& Enumerator::level_pool(int nt, int k) const {
  static const std::vector<EmbeddedRef> empty;
  const auto& levels = d_state[nt].levels;
  if (k < 1 || k >= static_cast<int>(levels.size())) return empty;
  return levels[k];
}

void Enumerator::admit(int nt, const EmbeddedRef& e) {
  ++d_stats.built;
  NtState& st = d_state[nt];
  if (has_holes(e)) {
    std::vector<Term> holes;
    Term key = rewrite(unembed_with_holes(e, holes));
    if (!st.hole_key_seen.insert(key).second) {
      ++d_stats.pruned_duplicate;
      return;
    }
    st.levels[e->size].push_back(e);
    ++d_stats.admitted;
    d_last_productive = std::max(d_last_productive, e->size);
    return;
  }
  std::string sig;
  for (const auto& env : d_envs) {
    sig += eval_embedded(e, env).str();
    sig += '|';
  }
  std::vector<EmbeddedRef>& bucket = st.by_sig[sig];
  if (!bucket.empty()) {
    // Same signature: decide by normal form. A fresh signature needs no
    // rewriting at all, and the bucket keeps same-key admissions out.
    Term key = rewrite(unembed(e));
    for (const auto& old : bucket) {
      if (rewrite(unembed(old)) == key) {
        ++d_stats.pruned_duplicate;
        return;
      }
    }
  }
  bucket.push_back(e);
  st.levels[e->size].push_back(e);
  ++d_stats.admitted;
  d_last_productive = std::max(d_last_productive, e->size);
}

void Enumerator::enumerate_ctor(int nt, int ctor_index, int k) {
  const Constructor& c = d_grammar.nt(nt).constructors[ctor_index];
  if (c.is_constant_slot) {
    if (k == 1) admit(nt, make_const_hole(d_grammar, nt, ctor_index));
    return;
  }
  size_t m = c.arity();
  if (m == 0) {
    if (k == 1) admit(nt, make_embedded(d_grammar, nt, ctor_index, {}));
    return;
  }
  if (k < 1 + static_cast<int>(m)) return;
  int budget = k - 1;

  std::vector<int> parts(m, 1);
  std::vector<const std::vector<EmbeddedRef>*> pools(m);
  std::vector<size_t> idx(m);

  // Enumerate compositions of `budget` into m parts, lexicographically.
  std::function<void(size_t, int)> compose = [&](size_t j, int rest) {
    if (j == m - 1) {
      parts[j] = rest;
      for (size_t i = 0; i < m; ++i) {
        pools[i] = &level_pool(c.child_nts[i], parts[i]);
        if (pools[i]->empty()) return;
      }
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        bool blocked = false;
        std::vector<EmbeddedRef> children(m);
        for (size_t i = 0; i < m; ++i) {
          children[i] = (*pools[i])[idx[i]];
          if (forbidden(nt, ctor_index, i, children[i]->ctor_index)) {
            ++d_stats.pruned_symmetry;
            blocked = true;
            break;
          }
        }
        if (!blocked) {
          admit(nt, make_embedded(d_grammar, nt, ctor_index,
                                  std::move(children)));
        }
        size_t i = m;
        while (i > 0) {
          --i;
          if (++idx[i] < pools[i]->size()) break;
          idx[i] = 0;
          if (i == 0) return;
        }
      }
    } else {
      for (int p = 1; p + static_cast<int>(m - j - 1) <= rest; ++p) {
        parts[j] = p;
        compose(j + 1, rest - p);
      }
    }
  };
  compose(0, budget);
}

void Enumerator::build_level(int k) {
  for (size_t nt = 0; nt < d_state.size(); ++nt) {
    d_state[nt].levels.resize(k + 1);
  }
  for (size_t nt = 0; nt < d_state.size(); ++nt) {
    const auto& ctors = d_grammar.nt(nt).constructors;
    for (size_t ci = 0; ci < ctors.size(); ++ci) {
      enumerate_ctor(static_cast<int>(nt), static_cast<int>(ci), k);
    }
  }
  d_built = k;
}

bool Enumerator::ensure_level(int k) {
  while (d_built < k) {
    if (d_exhausted || d_capped) return false;
    int next_level = d_built + 1;
    if (next_level > d_cfg.max_size) {
      d_capped = true;
      return false;
    }
    if (d_built >= 1 &&
        next_level > static_cast<int>(d_max_arity) * d_last_productive + 1) {
      d_exhausted = true;
      return false;
    }
    build_level(next_level);
  }
  return true;
}

std::optional<EmbeddedRef> Enumerator::next() {
  while (true) {
    if (d_cursor_size <= d_built) {
      const auto& pool = level_pool(d_grammar.start(), d_cursor_size);
      if (d_cursor_idx < pool.size()) return pool[d_cursor_idx++];
      ++d_cursor_size;
      d_cursor_idx = 0;
      continue;
    }
    if (!ensure_level(d_cursor_size)) return std::nullopt;
  }
}

}  // namespace minisy
