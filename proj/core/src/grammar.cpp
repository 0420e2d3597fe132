#include "minisy/grammar.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace minisy {

namespace {

// Reserved names contain a space, which no parsed symbol can carry.
std::string marker_name(const Sort& s) { return "!const " + s.str(); }

std::string slot_name(size_t i) { return "!slot" + std::to_string(i); }

}  // namespace

Term constant_slot_marker(const Sort& s) {
  return Term::variable(marker_name(s), s);
}

bool is_constant_slot_marker(const Term& t) {
  return t.is_variable() && t.name() == marker_name(t.sort());
}

namespace {

/** Rebuilds a production into an analog, turning nonterminal variables
 *  and constant markers into slot variables. */
struct ProductionWalker {
  const std::unordered_map<std::string, int>& nt_index;
  const std::vector<NonterminalInfo>& nts;
  std::vector<NonterminalInfo>& synthetic;
  size_t first_synthetic;

  std::vector<Term> slots;
  std::vector<int> child_nts;

  int synthetic_for(const Sort& s) {
    for (size_t i = 0; i < synthetic.size(); ++i) {
      if (synthetic[i].sort == s) return static_cast<int>(first_synthetic + i);
    }
    NonterminalInfo info(marker_name(s), s);
    Constructor c;
    c.name = "const";
    c.sort = s;
    c.is_constant_slot = true;
    info.constructors.push_back(std::move(c));
    synthetic.push_back(std::move(info));
    return static_cast<int>(first_synthetic + synthetic.size() - 1);
  }

  Term fresh_slot(const Sort& s, int target_nt) {
    Term v = Term::variable(slot_name(slots.size()), s);
    slots.push_back(v);
    child_nts.push_back(target_nt);
    return v;
  }

  Term walk(const Term& t) {
    if (t.is_variable()) {
      if (is_constant_slot_marker(t)) {
        return fresh_slot(t.sort(), synthetic_for(t.sort()));
      }
      auto it = nt_index.find(t.name());
      if (it != nt_index.end() && nts[it->second].sort == t.sort()) {
        return fresh_slot(t.sort(), it->second);
      }
      return t;
    }
    if (t.is_constant()) return t;
    std::vector<Term> ch;
    ch.reserve(t.arity());
    for (size_t i = 0; i < t.arity(); ++i) ch.push_back(walk(t.child(i)));
    if (t.is_call()) return Term::call(t.name(), t.sort(), std::move(ch));
    return Term::apply(t.op(), std::move(ch));
  }
};

std::string ctor_name_for(const Term& production) {
  if (production.is_constant()) return production.value().str();
  if (production.is_variable()) {
    return is_constant_slot_marker(production) ? "anyconst"
                                               : production.name();
  }
  if (production.is_call()) return production.name();
  return std::string(op_name(production.op()));
}

}  // namespace

DatatypeGrammar DatatypeGrammar::embed(const GrammarSpec& spec,
                                       const std::vector<Term>& params) {
  (void)params;
  if (spec.empty()) throw GrammarError("grammar has no nonterminals");
  DatatypeGrammar g;
  g.d_explicit = true;
  std::unordered_map<std::string, int> nt_index;
  for (const auto& rule : spec.rules) {
    if (nt_index.count(rule.nt)) {
      throw GrammarError("duplicate nonterminal " + rule.nt);
    }
    nt_index.emplace(rule.nt, static_cast<int>(g.d_nts.size()));
    g.d_nts.emplace_back(rule.nt, rule.sort);
  }
  std::vector<NonterminalInfo> synthetic;
  for (size_t r = 0; r < spec.rules.size(); ++r) {
    const auto& rule = spec.rules[r];
    if (rule.productions.empty()) {
      throw GrammarError("nonterminal " + rule.nt + " has no productions");
    }
    for (const auto& p : rule.productions) {
      if (p.sort() != rule.sort) {
        throw GrammarError("production " + p.str() + " has sort " +
                           p.sort().str() + ", expected " + rule.sort.str());
      }
      ProductionWalker walker{nt_index, g.d_nts, synthetic, g.d_nts.size(),
                              {}, {}};
      Constructor c;
      c.analog = walker.walk(p);
      c.name = ctor_name_for(p);
      c.sort = rule.sort;
      c.slots = std::move(walker.slots);
      c.child_nts = std::move(walker.child_nts);
      g.d_nts[r].constructors.push_back(std::move(c));
    }
  }
  for (auto& nt : synthetic) {
    g.d_has_const_slots = true;
    g.d_nts.push_back(std::move(nt));
  }
  return g;
}

namespace {

void add_production(GrammarSpec& spec, size_t rule, Term p) {
  spec.rules[rule].productions.push_back(std::move(p));
}

}  // namespace

DatatypeGrammar DatatypeGrammar::default_for(
    const std::vector<Term>& params, const Sort& ret,
    const std::vector<Value>& extra_literals) {
  std::vector<Sort> sorts{ret};
  auto want = [&sorts](const Sort& s) {
    if (std::find(sorts.begin(), sorts.end(), s) == sorts.end()) {
      sorts.push_back(s);
    }
  };
  for (const auto& p : params) want(p.sort());
  bool has_string = std::any_of(sorts.begin(), sorts.end(),
                                [](const Sort& s) { return s.is_string(); });
  if (has_string) want(Sort::int_sort());
  want(Sort::bool_sort());

  // The start nonterminal (index 0) produces the return sort.
  GrammarSpec spec;
  std::unordered_map<std::string, size_t> by_sort;
  for (size_t i = 0; i < sorts.size(); ++i) {
    std::string name;
    if (i == 0) {
      name = "Start";
    } else if (sorts[i].is_int()) {
      name = "NtInt";
    } else if (sorts[i].is_bool()) {
      name = "NtBool";
    } else if (sorts[i].is_string()) {
      name = "NtString";
    } else {
      name = "NtBv" + std::to_string(sorts[i].bv_width());
    }
    by_sort.emplace(sorts[i].str(), i);
    spec.rules.emplace_back(name, sorts[i]);
  }
  auto nt_var = [&](const Sort& s) {
    size_t i = by_sort.at(s.str());
    return Term::variable(spec.rules[i].nt, s);
  };
  bool has_int = by_sort.count(Sort::int_sort().str()) > 0;
  Term B = nt_var(Sort::bool_sort());

  for (size_t i = 0; i < sorts.size(); ++i) {
    const Sort& s = sorts[i];
    Term N = nt_var(s);
    for (const auto& p : params) {
      if (p.sort() == s) add_production(spec, i, p);
    }
    for (const auto& v : extra_literals) {
      if (v.sort() == s) add_production(spec, i, Term::constant(v));
    }
    if (s.is_int()) {
      add_production(spec, i, Term::int_const(0));
      add_production(spec, i, Term::int_const(1));
      add_production(spec, i, Term::apply(Op::Add, {N, N}));
      add_production(spec, i, Term::apply(Op::Sub, {N, N}));
      add_production(spec, i, Term::apply(Op::Ite, {B, N, N}));
      if (has_string && by_sort.count(Sort::string_sort().str())) {
        Term S = nt_var(Sort::string_sort());
        add_production(spec, i, Term::apply(Op::StrLen, {S}));
        add_production(spec, i, Term::apply(Op::StrIndexof, {S, S, N}));
      }
    } else if (s.is_bool()) {
      add_production(spec, i, Term::true_term());
      add_production(spec, i, Term::false_term());
      if (has_int) {
        Term I = nt_var(Sort::int_sort());
        add_production(spec, i, Term::apply(Op::Le, {I, I}));
        add_production(spec, i, Term::apply(Op::Eq, {I, I}));
      }
      add_production(spec, i, Term::apply(Op::Not, {N}));
      add_production(spec, i, Term::apply(Op::And, {N, N}));
      add_production(spec, i, Term::apply(Op::Or, {N, N}));
      if (by_sort.count(Sort::string_sort().str())) {
        Term S = nt_var(Sort::string_sort());
        add_production(spec, i, Term::apply(Op::StrContains, {S, S}));
        add_production(spec, i, Term::apply(Op::Eq, {S, S}));
      }
      for (const auto& other : sorts) {
        if (!other.is_bitvec()) continue;
        Term V = nt_var(other);
        add_production(spec, i, Term::apply(Op::BvUle, {V, V}));
        add_production(spec, i, Term::apply(Op::Eq, {V, V}));
      }
    } else if (s.is_string()) {
      add_production(spec, i, Term::constant(Value(CodePoints{})));
      add_production(spec, i, Term::apply(Op::StrConcat, {N, N}));
      if (has_int) {
        Term I = nt_var(Sort::int_sort());
        add_production(spec, i, Term::apply(Op::StrSubstr, {N, I, I}));
        add_production(spec, i, Term::apply(Op::StrAt, {N, I}));
      }
      add_production(spec, i, Term::apply(Op::StrReplace, {N, N, N}));
      add_production(spec, i, Term::apply(Op::Ite, {B, N, N}));
    } else {
      uint32_t w = s.bv_width();
      add_production(spec, i, Term::constant(Value(BitVec(w, 0))));
      add_production(spec, i, Term::constant(Value(BitVec(w, 1))));
      add_production(spec, i, Term::apply(Op::BvAdd, {N, N}));
      add_production(spec, i, Term::apply(Op::BvSub, {N, N}));
      add_production(spec, i, Term::apply(Op::BvAnd, {N, N}));
      add_production(spec, i, Term::apply(Op::BvOr, {N, N}));
      add_production(spec, i, Term::apply(Op::BvXor, {N, N}));
      add_production(spec, i, Term::apply(Op::BvNot, {N}));
      add_production(spec, i, Term::apply(Op::BvNeg, {N}));
      add_production(spec, i, Term::apply(Op::BvShl, {N, N}));
      add_production(spec, i, Term::apply(Op::BvLshr, {N, N}));
      add_production(spec, i, Term::apply(Op::Ite, {B, N, N}));
    }
  }
  DatatypeGrammar g = embed(spec, params);
  g.d_explicit = false;
  return g;
}

int DatatypeGrammar::bool_nonterminal() const {
  for (size_t i = 0; i < d_nts.size(); ++i) {
    if (d_nts[i].sort.is_bool()) return static_cast<int>(i);
  }
  return -1;
}

bool DatatypeGrammar::nt_has_ite(int nt_index) const {
  for (const auto& c : d_nts[nt_index].constructors) {
    if (!c.is_constant_slot && c.analog.is_apply(Op::Ite)) return true;
  }
  return false;
}

EmbeddedRef make_embedded(const DatatypeGrammar& g, int nt, int ctor_index,
                          std::vector<EmbeddedRef> children) {
  const Constructor& c = g.nt(nt).constructors[ctor_index];
  if (c.is_constant_slot) {
    throw GrammarError("constant slot constructor needs a literal or hole");
  }
  if (children.size() != c.arity()) {
    throw GrammarError("constructor " + c.name + " expects " +
                       std::to_string(c.arity()) + " children");
  }
  int size = 1;
  for (const auto& ch : children) size += ch->size;
  return std::make_shared<EmbeddedTerm>(
      EmbeddedTerm{nt, ctor_index, &c, std::move(children), std::nullopt,
                   size});
}

EmbeddedRef make_const_hole(const DatatypeGrammar& g, int nt, int ctor_index) {
  const Constructor& c = g.nt(nt).constructors[ctor_index];
  if (!c.is_constant_slot) throw GrammarError("not a constant slot");
  return std::make_shared<EmbeddedTerm>(
      EmbeddedTerm{nt, ctor_index, &c, {}, std::nullopt, 1});
}

EmbeddedRef make_const_value(const DatatypeGrammar& g, int nt, int ctor_index,
                             Value v) {
  const Constructor& c = g.nt(nt).constructors[ctor_index];
  if (!c.is_constant_slot) throw GrammarError("not a constant slot");
  return std::make_shared<EmbeddedTerm>(
      EmbeddedTerm{nt, ctor_index, &c, {}, std::move(v), 1});
}

bool has_holes(const EmbeddedRef& e) {
  if (e->ctor->is_constant_slot) return !e->const_value.has_value();
  for (const auto& c : e->children) {
    if (has_holes(c)) return true;
  }
  return false;
}

Term unembed(const EmbeddedRef& e) {
  if (e->ctor->is_constant_slot) {
    if (!e->const_value) throw GrammarError("open constant hole");
    return Term::constant(*e->const_value);
  }
  if (e->children.empty()) return e->ctor->analog;
  std::unordered_map<Term, Term, TermHash> subst;
  for (size_t i = 0; i < e->children.size(); ++i) {
    subst.emplace(e->ctor->slots[i], unembed(e->children[i]));
  }
  return substitute(e->ctor->analog, subst);
}

namespace {

Term unembed_holes_rec(const EmbeddedRef& e, std::vector<Term>& holes) {
  if (e->ctor->is_constant_slot) {
    if (e->const_value) return Term::constant(*e->const_value);
    Term h = Term::variable("!hole" + std::to_string(holes.size()),
                            e->ctor->sort);
    holes.push_back(h);
    return h;
  }
  if (e->children.empty()) return e->ctor->analog;
  std::unordered_map<Term, Term, TermHash> subst;
  for (size_t i = 0; i < e->children.size(); ++i) {
    subst.emplace(e->ctor->slots[i], unembed_holes_rec(e->children[i], holes));
  }
  return substitute(e->ctor->analog, subst);
}

}  // namespace

Term unembed_with_holes(const EmbeddedRef& e, std::vector<Term>& holes) {
  return unembed_holes_rec(e, holes);
}

EmbeddedRef fill_holes(const EmbeddedRef& e, const std::vector<Value>& vals) {
  size_t next = 0;
  struct Filler {
    const std::vector<Value>& vals;
    size_t& next;
    EmbeddedRef fill(const EmbeddedRef& e) {
      if (e->ctor->is_constant_slot && !e->const_value) {
        if (next >= vals.size()) throw GrammarError("not enough hole values");
        Value v = vals[next++];
        return std::make_shared<EmbeddedTerm>(
            EmbeddedTerm{e->nt, e->ctor_index, e->ctor, {}, std::move(v), 1});
      }
      if (e->children.empty()) return e;
      std::vector<EmbeddedRef> ch;
      ch.reserve(e->children.size());
      for (const auto& c : e->children) ch.push_back(fill(c));
      return std::make_shared<EmbeddedTerm>(
          EmbeddedTerm{e->nt, e->ctor_index, e->ctor, std::move(ch),
                       e->const_value, e->size});
    }
  } filler{vals, next};
  EmbeddedRef out = filler.fill(e);
  if (next != vals.size()) throw GrammarError("too many hole values");
  return out;
}

Value eval_embedded(const EmbeddedRef& e, const Environment& env) {
  if (e->ctor->is_constant_slot) {
    if (!e->const_value) throw EvalError("open constant hole");
    return *e->const_value;
  }
  if (e->children.empty()) return evaluate(e->ctor->analog, env);
  Environment scope = env;
  for (size_t i = 0; i < e->children.size(); ++i) {
    scope.bind(e->ctor->slots[i].name(), eval_embedded(e->children[i], env));
  }
  return evaluate(e->ctor->analog, scope);
}

namespace {

struct DeriveCheck {
  const DatatypeGrammar& g;
  // 1 = derivable, -1 = in progress (cycle cut); failures are recomputed
  std::map<std::pair<Term, size_t>, int> memo;

  bool derivable(const Term& t, size_t nt) {
    auto key = std::make_pair(t, nt);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second == 1;
    memo[key] = -1;
    bool ok = false;
    for (const Constructor& c : g.nt(nt).constructors) {
      if (c.is_constant_slot) {
        if (t.is_constant() && t.sort() == c.sort) {
          ok = true;
          break;
        }
        continue;
      }
      if (matches(t, c.analog, c)) {
        ok = true;
        break;
      }
    }
    if (ok) {
      memo[key] = 1;
    } else {
      memo.erase(key);
    }
    return ok;
  }

  bool matches(const Term& t, const Term& analog, const Constructor& c) {
    if (analog.is_variable()) {
      for (size_t i = 0; i < c.slots.size(); ++i) {
        if (c.slots[i] == analog) return derivable(t, c.child_nts[i]);
      }
      return t == analog;
    }
    if (analog.is_constant()) return t == analog;
    if (analog.is_call()) {
      if (!t.is_call() || t.name() != analog.name()) return false;
    } else {
      if (!t.is_apply() || t.op() != analog.op()) return false;
    }
    if (t.arity() != analog.arity()) return false;
    for (size_t i = 0; i < t.arity(); ++i) {
      if (!matches(t.child(i), analog.child(i), c)) return false;
    }
    return true;
  }
};

}  // namespace

bool grammar_derivable(const DatatypeGrammar& g, const Term& t, size_t nt) {
  DeriveCheck check{g, {}};
  return check.derivable(t, nt);
}

}  // namespace minisy
