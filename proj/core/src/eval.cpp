#include "minisy/eval.hpp"

#include <unordered_set>

namespace minisy {

void Environment::bind(const std::string& name, Value v) {
  d_bindings.insert_or_assign(name, std::move(v));
}

const Value* Environment::lookup(const std::string& name) const {
  auto it = d_bindings.find(name);
  return it == d_bindings.end() ? nullptr : &it->second;
}

std::string Environment::str() const {
  // sorted for stable diagnostics
  std::vector<std::pair<std::string, Value>> items(d_bindings.begin(),
                                                   d_bindings.end());
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out = "{";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i].first + " -> " + items[i].second.str();
  }
  out += "}";
  return out;
}

namespace {

Integer str_to_int(const CodePoints& s) {
  if (s.empty()) return Integer(-1);
  Integer acc = 0;
  for (char32_t c : s) {
    if (c < U'0' || c > U'9') return Integer(-1);
    acc = acc * 10 + static_cast<int>(c - U'0');
  }
  return acc;
}

CodePoints int_to_str(const Integer& n) {
  if (n < 0) return CodePoints();
  std::string dec = n.str();
  return CodePoints(dec.begin(), dec.end());
}

/** SMT-LIB 2.6 conventions: out-of-range substr is "", indexof miss is -1. */
CodePoints substr(const CodePoints& s, const Integer& from, const Integer& len) {
  if (from < 0 || from >= Integer(s.size()) || len <= 0) return CodePoints();
  size_t start = static_cast<size_t>(from);
  Integer avail = Integer(s.size()) - from;
  size_t count = static_cast<size_t>(len < avail ? len : avail);
  return s.substr(start, count);
}

Integer indexof(const CodePoints& s, const CodePoints& t, const Integer& from) {
  if (from < 0 || from > Integer(s.size())) return Integer(-1);
  size_t pos = s.find(t, static_cast<size_t>(from));
  if (pos == CodePoints::npos) return Integer(-1);
  return Integer(pos);
}

Value eval_apply(Op op, const Term& t, const Environment& env);

Value eval_rec(const Term& t, const Environment& env) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return t.value();
    case Term::Kind::Variable: {
      const Value* v = env.lookup(t.name());
      if (!v) throw EvalError("unbound variable: " + t.name());
      return *v;
    }
    case Term::Kind::Call:
      throw EvalError("cannot evaluate application of unknown function: " +
                      t.name());
    case Term::Kind::Apply:
      return eval_apply(t.op(), t, env);
  }
  throw EvalError("bad term kind");
}

Value eval_apply(Op op, const Term& t, const Environment& env) {
  auto ev = [&](size_t i) { return eval_rec(t.child(i), env); };
  switch (op) {
    case Op::Ite:
      return ev(0).as_bool() ? ev(1) : ev(2);
    case Op::And:
      for (size_t i = 0; i < t.arity(); ++i)
        if (!ev(i).as_bool()) return Value(false);
      return Value(true);
    case Op::Or:
      for (size_t i = 0; i < t.arity(); ++i)
        if (ev(i).as_bool()) return Value(true);
      return Value(false);
    case Op::Not:
      return Value(!ev(0).as_bool());
    case Op::Implies:
      return Value(!ev(0).as_bool() || ev(1).as_bool());
    case Op::Add: {
      Integer acc = 0;
      for (size_t i = 0; i < t.arity(); ++i) acc += ev(i).as_int();
      return Value(acc);
    }
    case Op::Sub:
      return Value(Integer(ev(0).as_int() - ev(1).as_int()));
    case Op::Neg:
      return Value(Integer(-ev(0).as_int()));
    case Op::Mul:
      return Value(Integer(ev(0).as_int() * ev(1).as_int()));
    case Op::Eq:
      return Value(ev(0) == ev(1));
    case Op::Le:
      return Value(ev(0).as_int() <= ev(1).as_int());
    case Op::Lt:
      return Value(ev(0).as_int() < ev(1).as_int());
    case Op::Ge:
      return Value(ev(0).as_int() >= ev(1).as_int());
    case Op::Gt:
      return Value(ev(0).as_int() > ev(1).as_int());
    case Op::StrConcat: {
      CodePoints acc;
      for (size_t i = 0; i < t.arity(); ++i) acc += ev(i).as_string();
      return Value(std::move(acc));
    }
    case Op::StrLen:
      return Value(Integer(ev(0).as_string().size()));
    case Op::StrSubstr:
      return Value(substr(ev(0).as_string(), ev(1).as_int(), ev(2).as_int()));
    case Op::StrIndexof:
      return Value(indexof(ev(0).as_string(), ev(1).as_string(), ev(2).as_int()));
    case Op::StrAt:
      return Value(substr(ev(0).as_string(), ev(1).as_int(), Integer(1)));
    case Op::StrContains:
      return Value(ev(0).as_string().find(ev(1).as_string()) != CodePoints::npos);
    case Op::StrReplace: {
      CodePoints s = ev(0).as_string();
      CodePoints from = ev(1).as_string();
      CodePoints to = ev(2).as_string();
      size_t pos = s.find(from);
      if (pos == CodePoints::npos) return Value(std::move(s));
      s.replace(pos, from.size(), to);
      return Value(std::move(s));
    }
    case Op::StrToInt:
      return Value(str_to_int(ev(0).as_string()));
    case Op::IntToStr:
      return Value(int_to_str(ev(0).as_int()));
    case Op::BvAdd: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, a.bits + ev(1).as_bitvec().bits));
    }
    case Op::BvSub: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, a.bits - ev(1).as_bitvec().bits));
    }
    case Op::BvAnd: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, a.bits & ev(1).as_bitvec().bits));
    }
    case Op::BvOr: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, a.bits | ev(1).as_bitvec().bits));
    }
    case Op::BvXor: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, a.bits ^ ev(1).as_bitvec().bits));
    }
    case Op::BvNot: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, ~a.bits));
    }
    case Op::BvNeg: {
      BitVec a = ev(0).as_bitvec();
      return Value(BitVec(a.width, -a.bits));
    }
    case Op::BvShl: {
      BitVec a = ev(0).as_bitvec();
      Integer k = ev(1).as_bitvec().bits;
      if (k >= a.width) return Value(BitVec(a.width, 0));
      return Value(BitVec(a.width, a.bits << static_cast<unsigned>(k)));
    }
    case Op::BvLshr: {
      BitVec a = ev(0).as_bitvec();
      Integer k = ev(1).as_bitvec().bits;
      if (k >= a.width) return Value(BitVec(a.width, 0));
      return Value(BitVec(a.width, a.bits >> static_cast<unsigned>(k)));
    }
    case Op::BvUlt:
      return Value(ev(0).as_bitvec().bits < ev(1).as_bitvec().bits);
    case Op::BvUle:
      return Value(ev(0).as_bitvec().bits <= ev(1).as_bitvec().bits);
  }
  throw EvalError("bad operator");
}

}  // namespace

Value evaluate(const Term& t, const Environment& env) {
  return eval_rec(t, env);
}

namespace {

Term subst_rec(const Term& t,
               const std::unordered_map<Term, Term, TermHash>& sub,
               std::unordered_map<Term, Term, TermHash>& memo) {
  if (t.is_constant()) return t;
  if (t.is_variable()) {
    auto it = sub.find(t);
    if (it == sub.end()) return t;
    if (it->second.sort() != t.sort())
      throw SortError("substitution changes sort of " + t.name());
    return it->second;
  }
  auto mit = memo.find(t);
  if (mit != memo.end()) return mit->second;
  std::vector<Term> ch;
  ch.reserve(t.arity());
  bool changed = false;
  for (const Term& c : t.children()) {
    Term r = subst_rec(c, sub, memo);
    changed |= (r != c);
    ch.push_back(r);
  }
  Term out = t;
  if (changed) {
    out = t.is_call() ? Term::call(t.name(), t.sort(), std::move(ch))
                      : Term::apply(t.op(), std::move(ch));
  }
  memo.emplace(t, out);
  return out;
}

}  // namespace

Term substitute(const Term& t,
                const std::unordered_map<Term, Term, TermHash>& sub) {
  if (sub.empty()) return t;
  std::unordered_map<Term, Term, TermHash> memo;
  return subst_rec(t, sub, memo);
}

namespace {

Term replace_rec(const Term& t, const Term& from, const Term& to,
                 std::unordered_map<Term, Term, TermHash>& memo) {
  if (t == from) return to;
  if (t.is_constant() || t.is_variable()) return t;
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  std::vector<Term> ch;
  ch.reserve(t.arity());
  bool changed = false;
  for (const Term& c : t.children()) {
    Term r = replace_rec(c, from, to, memo);
    changed |= (r != c);
    ch.push_back(r);
  }
  Term out = t;
  if (changed) {
    out = t.is_call() ? Term::call(t.name(), t.sort(), std::move(ch))
                      : Term::apply(t.op(), std::move(ch));
  }
  memo.emplace(t, out);
  return out;
}

}  // namespace

Term replace_subterm(const Term& t, const Term& from, const Term& to) {
  if (from.sort() != to.sort()) {
    throw SortError("replacement changes sort");
  }
  std::unordered_map<Term, Term, TermHash> memo;
  return replace_rec(t, from, to, memo);
}

Term reduce_call(const Term& t, const std::string& fn,
                 const std::vector<Term>& params, const Term& body) {
  switch (t.kind()) {
    case Term::Kind::Constant:
    case Term::Kind::Variable:
      return t;
    default:
      break;
  }
  std::vector<Term> ch;
  ch.reserve(t.arity());
  for (const Term& c : t.children()) ch.push_back(reduce_call(c, fn, params, body));
  if (t.is_call() && t.name() == fn) {
    if (ch.size() != params.size())
      throw SortError("arity mismatch in application of " + fn);
    std::unordered_map<Term, Term, TermHash> sub;
    for (size_t i = 0; i < params.size(); ++i) sub.emplace(params[i], ch[i]);
    return substitute(body, sub);
  }
  return t.is_call() ? Term::call(t.name(), t.sort(), std::move(ch))
                     : Term::apply(t.op(), std::move(ch));
}

std::vector<Term> free_variables(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  std::unordered_set<Term, TermHash> visited;
  // iterative DFS preserving first-occurrence order
  std::vector<std::pair<Term, size_t>> stack{{t, 0}};
  while (!stack.empty()) {
    auto& [cur, idx] = stack.back();
    if (cur.is_variable()) {
      if (seen.insert(cur).second) out.push_back(cur);
      stack.pop_back();
      continue;
    }
    if (cur.is_constant() || idx >= cur.arity()) {
      stack.pop_back();
      continue;
    }
    Term next = cur.child(idx++);
    stack.push_back({next, 0});
  }
  return out;
}

bool contains_call(const Term& t, const std::string& fn) {
  if (t.is_call() && t.name() == fn) return true;
  for (const Term& c : t.children())
    if (contains_call(c, fn)) return true;
  return false;
}

bool contains_any_call(const Term& t) {
  if (t.is_call()) return true;
  for (const Term& c : t.children())
    if (contains_any_call(c)) return true;
  return false;
}

}  // namespace minisy
