#ifndef MINISY_TESTS_ORACLES_HPP
#define MINISY_TESTS_ORACLES_HPP

// Reference implementations kept deliberately separate from the library:
// a direct recursive evaluator, an unpruned grammar enumerator, and a
// boxed model search. Tests use these to cross-check the optimized
// counterparts, so nothing here may call the library's evaluator,
// enumerator, or solvers.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "minisy/eval.hpp"
#include "minisy/grammar.hpp"
#include "minisy/term.hpp"
#include "minisy/value.hpp"

namespace oracle {

using minisy::CodePoints;
using minisy::GrammarSpec;
using minisy::Integer;
using minisy::Op;
using minisy::Sort;
using minisy::Term;
using minisy::Value;

using Env = std::map<std::string, Value>;

inline Integer bv_mask(uint32_t w) { return (Integer(1) << w) - 1; }

inline Value ref_eval(const Term& t, const Env& env) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return t.value();
    case Term::Kind::Variable: {
      auto it = env.find(t.name());
      if (it == env.end()) throw std::runtime_error("unbound " + t.name());
      return it->second;
    }
    case Term::Kind::Call:
      throw std::runtime_error("call in reference evaluation");
    case Term::Kind::Apply:
      break;
  }
  std::vector<Value> c;
  c.reserve(t.arity());
  for (const Term& ch : t.children()) c.push_back(ref_eval(ch, env));
  auto b = [&](size_t i) { return c[i].as_bool(); };
  auto z = [&](size_t i) -> const Integer& { return c[i].as_int(); };
  auto s = [&](size_t i) -> const CodePoints& { return c[i].as_string(); };
  switch (t.op()) {
    case Op::Add: {
      Integer r = 0;
      for (const auto& v : c) r += v.as_int();
      return Value(r);
    }
    case Op::Sub:
      return Value(Integer(z(0) - z(1)));
    case Op::Neg:
      return Value(Integer(-z(0)));
    case Op::Mul: {
      Integer r = 1;
      for (const auto& v : c) r *= v.as_int();
      return Value(r);
    }
    case Op::Ite:
      return b(0) ? c[1] : c[2];
    case Op::Eq:
      return Value(c[0] == c[1]);
    case Op::Le:
      return Value(z(0) <= z(1));
    case Op::Lt:
      return Value(z(0) < z(1));
    case Op::Ge:
      return Value(z(0) >= z(1));
    case Op::Gt:
      return Value(z(0) > z(1));
    case Op::And: {
      for (size_t i = 0; i < c.size(); ++i)
        if (!b(i)) return Value(false);
      return Value(true);
    }
    case Op::Or: {
      for (size_t i = 0; i < c.size(); ++i)
        if (b(i)) return Value(true);
      return Value(false);
    }
    case Op::Not:
      return Value(!b(0));
    case Op::Implies:
      return Value(!b(0) || b(1));
    case Op::StrConcat: {
      CodePoints r;
      for (const auto& v : c) r += v.as_string();
      return Value(r);
    }
    case Op::StrLen:
      return Value(Integer(s(0).size()));
    case Op::StrSubstr: {
      const CodePoints& str = s(0);
      const Integer &i = z(1), &n = z(2);
      Integer len(str.size());
      if (i < 0 || i >= len || n <= 0) return Value(CodePoints());
      Integer take = n <= len - i ? n : len - i;
      return Value(str.substr(size_t(i), size_t(take)));
    }
    case Op::StrIndexof: {
      const CodePoints &str = s(0), &pat = s(1);
      const Integer& from = z(2);
      Integer len(str.size());
      if (from < 0 || from > len) return Value(Integer(-1));
      size_t pos = str.find(pat, size_t(from));
      if (pos == CodePoints::npos) return Value(Integer(-1));
      return Value(Integer(pos));
    }
    case Op::StrAt: {
      const CodePoints& str = s(0);
      const Integer& i = z(1);
      if (i < 0 || i >= Integer(str.size())) return Value(CodePoints());
      return Value(CodePoints(1, str[size_t(i)]));
    }
    case Op::StrContains:
      return Value(s(0).find(s(1)) != CodePoints::npos);
    case Op::StrReplace: {
      const CodePoints &str = s(0), &pat = s(1), &rep = s(2);
      if (pat.empty()) return Value(rep + str);
      size_t pos = str.find(pat);
      if (pos == CodePoints::npos) return c[0];
      CodePoints r = str.substr(0, pos);
      r += rep;
      r += str.substr(pos + pat.size());
      return Value(r);
    }
    case Op::StrToInt: {
      const CodePoints& str = s(0);
      if (str.empty()) return Value(Integer(-1));
      Integer r = 0;
      for (char32_t ch : str) {
        if (ch < U'0' || ch > U'9') return Value(Integer(-1));
        r = r * 10 + int(ch - U'0');
      }
      return Value(r);
    }
    case Op::IntToStr: {
      if (z(0) < 0) return Value(CodePoints());
      std::string dec = z(0).str();
      return Value(CodePoints(dec.begin(), dec.end()));
    }
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvShl:
    case Op::BvLshr: {
      const auto &l = c[0].as_bitvec(), &r = c[1].as_bitvec();
      Integer mask = bv_mask(l.width);
      Integer out;
      switch (t.op()) {
        case Op::BvAdd: out = l.bits + r.bits; break;
        case Op::BvSub: out = l.bits - r.bits + (mask + 1); break;
        case Op::BvAnd: out = l.bits & r.bits; break;
        case Op::BvOr: out = l.bits | r.bits; break;
        case Op::BvXor: out = l.bits ^ r.bits; break;
        case Op::BvShl:
          out = r.bits >= l.width ? Integer(0)
                                  : l.bits << unsigned(r.bits);
          break;
        default:
          out = r.bits >= l.width ? Integer(0)
                                  : l.bits >> unsigned(r.bits);
          break;
      }
      return Value(minisy::BitVec(l.width, out & mask));
    }
    case Op::BvNot: {
      const auto& v = c[0].as_bitvec();
      return Value(minisy::BitVec(v.width, v.bits ^ bv_mask(v.width)));
    }
    case Op::BvNeg: {
      const auto& v = c[0].as_bitvec();
      Integer m = bv_mask(v.width) + 1;
      return Value(minisy::BitVec(v.width, (m - v.bits) % m));
    }
    case Op::BvUlt:
      return Value(c[0].as_bitvec().bits < c[1].as_bitvec().bits);
    case Op::BvUle:
      return Value(c[0].as_bitvec().bits <= c[1].as_bitvec().bits);
  }
  throw std::runtime_error("unhandled operator");
}

/** Free variables of a term by direct traversal, no ordering guarantees. */
inline void ref_free_vars(const Term& t, std::map<std::string, Sort>& out) {
  if (t.is_variable()) {
    out.emplace(t.name(), t.sort());
    return;
  }
  for (const Term& ch : t.children()) ref_free_vars(ch, out);
}

/**
 * Unpruned bottom-up enumeration over a parsed grammar. Terms are sized
 * by production applications: applying a production costs 1 plus the
 * sizes of the subterms filled into its nonterminal occurrences. No
 * deduplication of any kind is performed.
 */
class BruteForce {
 public:
  BruteForce(const GrammarSpec& spec, int max_size) : d_spec(spec) {
    for (const auto& r : spec.rules) d_index[r.nt] = d_pools.size(), d_pools.emplace_back();
    for (auto& p : d_pools) p.resize(size_t(max_size) + 1);
    for (int k = 1; k <= max_size; ++k)
      for (size_t nt = 0; nt < spec.rules.size(); ++nt) build(nt, k);
  }

  /** All start-symbol terms of size exactly k. */
  const std::vector<Term>& at(int k) const { return d_pools[0][size_t(k)]; }

  /** All start-symbol terms of size at most max_size. */
  std::vector<Term> all() const {
    std::vector<Term> out;
    for (const auto& level : d_pools[0])
      out.insert(out.end(), level.begin(), level.end());
    return out;
  }

 private:
  const GrammarSpec& d_spec;
  std::map<std::string, size_t> d_index;
  std::vector<std::vector<std::vector<Term>>> d_pools;  // [nt][size]

  struct Shape {
    Term body;                  // production with occurrences made distinct
    std::vector<Term> slots;    // fresh variable per occurrence
    std::vector<size_t> child;  // nonterminal index per occurrence
  };

  Term instrument(const Term& t, Shape& sh) {
    if (t.is_variable()) {
      auto it = d_index.find(t.name());
      if (it != d_index.end()) {
        Term slot = Term::variable("!bf" + std::to_string(sh.slots.size()),
                                   t.sort());
        sh.slots.push_back(slot);
        sh.child.push_back(it->second);
        return slot;
      }
      if (minisy::is_constant_slot_marker(t))
        throw std::runtime_error("constant slots unsupported here");
      return t;
    }
    if (!t.is_apply() && !t.is_call()) return t;
    std::vector<Term> kids;
    kids.reserve(t.arity());
    for (const Term& ch : t.children()) kids.push_back(instrument(ch, sh));
    return t.is_apply() ? Term::apply(t.op(), std::move(kids))
                        : Term::call(t.name(), t.sort(), std::move(kids));
  }

  void build(size_t nt, int k) {
    for (const Term& prod : d_spec.rules[nt].productions) {
      Shape sh;
      sh.body = instrument(prod, sh);
      if (sh.slots.empty()) {
        if (k == 1) d_pools[nt][size_t(k)].push_back(sh.body);
        continue;
      }
      std::vector<Term> chosen(sh.slots.size());
      fill(nt, k, sh, 0, k - 1, chosen);
    }
  }

  void fill(size_t nt, int k, const Shape& sh, size_t pos, int budget,
            std::vector<Term>& chosen) {
    size_t left = sh.slots.size() - pos;
    if (left == 0) {
      if (budget != 0) return;
      std::unordered_map<Term, Term, minisy::TermHash> sub;
      for (size_t i = 0; i < sh.slots.size(); ++i) sub[sh.slots[i]] = chosen[i];
      d_pools[nt][size_t(k)].push_back(minisy::substitute(sh.body, sub));
      return;
    }
    int hi = budget - int(left - 1);
    for (int sz = 1; sz <= hi; ++sz) {
      for (const Term& cand : d_pools[sh.child[pos]][size_t(sz)]) {
        chosen[pos] = cand;
        fill(nt, k, sh, pos + 1, budget - sz, chosen);
      }
    }
  }
};

/** Evaluation results over the environments, joined into one key. */
inline std::string signature(const Term& t, const std::vector<Env>& envs) {
  std::string key;
  for (const auto& env : envs) {
    key += ref_eval(t, env).str();
    key += '|';
  }
  return key;
}

/**
 * Exhaustive model search inside a box: integer variables range over
 * [lo, hi], booleans over both truth values. Returns the first
 * satisfying assignment in lexicographic order, if any.
 */
inline std::optional<Env> find_model_in_box(const Term& formula, long lo,
                                            long hi) {
  std::map<std::string, Sort> vars;
  ref_free_vars(formula, vars);
  std::vector<std::pair<std::string, Sort>> order(vars.begin(), vars.end());
  Env env;
  std::optional<Env> found;
  std::function<void(size_t)> go = [&](size_t i) {
    if (found) return;
    if (i == order.size()) {
      if (ref_eval(formula, env).as_bool()) found = env;
      return;
    }
    const auto& [name, sort] = order[i];
    if (sort.is_bool()) {
      for (bool bv : {false, true}) {
        env[name] = Value(bv);
        go(i + 1);
      }
    } else if (sort.is_int()) {
      for (long v = lo; v <= hi; ++v) {
        env[name] = Value(Integer(v));
        go(i + 1);
      }
    } else {
      throw std::runtime_error("unsupported sort in box search");
    }
  };
  go(0);
  return found;
}

}  // namespace oracle

#endif
