#include "minisy/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "minisy/eval.hpp"

namespace minisy {

namespace {

struct SExpr {
  enum class Kind { Symbol, Int, Str, Bv, List };
  Kind kind = Kind::List;
  std::string sym;
  Integer num;
  CodePoints text;
  BitVec bv{1, 0};
  std::vector<SExpr> items;
  int line = 0;
  int col = 0;

  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(const char* s) const { return is_symbol() && sym == s; }
  bool is_list() const { return kind == Kind::List; }
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) {
  throw ParseError(msg, at.line, at.col);
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : d_text(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (!eof()) {
      out.push_back(read_sexpr());
      skip_space();
    }
    return out;
  }

 private:
  const std::string& d_text;
  size_t d_pos = 0;
  int d_line = 1;
  int d_col = 1;

  bool eof() const { return d_pos >= d_text.size(); }
  char peek() const { return d_text[d_pos]; }

  char advance() {
    char c = d_text[d_pos++];
    if (c == '\n') {
      ++d_line;
      d_col = 1;
    } else {
      ++d_col;
    }
    return c;
  }

  [[noreturn]] void fail_here(const std::string& msg) {
    throw ParseError(msg, d_line, d_col);
  }

  void skip_space() {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  static bool symbol_char(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    static const std::string extra = "+-*/<>=!~?._$&^%@:";
    return extra.find(c) != std::string::npos;
  }

  SExpr read_sexpr() {
    skip_space();
    if (eof()) fail_here("unexpected end of input");
    SExpr e;
    e.line = d_line;
    e.col = d_col;
    char c = peek();
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::List;
      skip_space();
      while (!eof() && peek() != ')') {
        e.items.push_back(read_sexpr());
        skip_space();
      }
      if (eof()) fail(e, "unterminated list");
      advance();
      return e;
    }
    if (c == ')') fail_here("unexpected ')'");
    if (c == '"') return read_string(e);
    if (c == '#') return read_bitvec(e);
    std::string tok;
    while (!eof() && symbol_char(peek())) tok += advance();
    if (tok.empty()) fail_here(std::string("unexpected character '") + c + "'");
    bool digits = std::all_of(tok.begin(), tok.end(), [](char d) {
      return std::isdigit(static_cast<unsigned char>(d));
    });
    if (digits) {
      e.kind = SExpr::Kind::Int;
      e.num = Integer(tok);
    } else {
      e.kind = SExpr::Kind::Symbol;
      e.sym = std::move(tok);
    }
    return e;
  }

  SExpr read_string(SExpr e) {
    advance();
    std::string raw;
    while (true) {
      if (eof()) fail(e, "unterminated string literal");
      char c = advance();
      if (c == '"') {
        if (!eof() && peek() == '"') {
          raw += '"';
          advance();
          continue;
        }
        break;
      }
      raw += c;
    }
    e.kind = SExpr::Kind::Str;
    e.text = utf8_decode(raw);
    return e;
  }

  SExpr read_bitvec(SExpr e) {
    advance();
    if (eof()) fail(e, "unterminated bitvector literal");
    char base = advance();
    std::string digits;
    while (!eof() && std::isalnum(static_cast<unsigned char>(peek()))) {
      digits += advance();
    }
    if (digits.empty()) fail(e, "empty bitvector literal");
    e.kind = SExpr::Kind::Bv;
    if (base == 'b') {
      Integer v = 0;
      for (char d : digits) {
        if (d != '0' && d != '1') fail(e, "bad binary digit");
        v = v * 2 + (d - '0');
      }
      e.bv = BitVec(static_cast<uint32_t>(digits.size()), v);
    } else if (base == 'x') {
      Integer v = 0;
      for (char d : digits) {
        int nib;
        if (d >= '0' && d <= '9') {
          nib = d - '0';
        } else if (d >= 'a' && d <= 'f') {
          nib = d - 'a' + 10;
        } else if (d >= 'A' && d <= 'F') {
          nib = d - 'A' + 10;
        } else {
          fail(e, "bad hex digit");
        }
        v = v * 16 + nib;
      }
      e.bv = BitVec(static_cast<uint32_t>(4 * digits.size()), v);
    } else {
      fail(e, "unsupported literal prefix");
    }
    return e;
  }
};

struct DefinedFun {
  std::vector<Term> params;
  Term body;
};

class ProblemBuilder {
 public:
  Problem run(const std::vector<SExpr>& commands) {
    for (const auto& cmd : commands) handle(cmd);
    if (d_prob.functions.empty()) {
      throw ParseError("input declares nothing to synthesize", 1, 1);
    }
    if (!d_prob.check_synth_seen) {
      d_prob.warnings.push_back("missing (check-synth)");
    }
    return std::move(d_prob);
  }

 private:
  Problem d_prob;
  std::unordered_map<std::string, DefinedFun> d_defs;
  std::unordered_map<std::string, Term> d_globals;
  bool d_inv_constraint_seen = false;

  struct BuildCtx {
    std::vector<std::unordered_map<std::string, Term>> frames;
    bool allow_markers = false;

    const Term* lookup(const std::string& name) const {
      for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
        auto f = it->find(name);
        if (f != it->end()) return &f->second;
      }
      return nullptr;
    }
  };

  void handle(const SExpr& cmd) {
    if (!cmd.is_list() || cmd.items.empty() || !cmd.items[0].is_symbol()) {
      fail(cmd, "expected a command");
    }
    const std::string& head = cmd.items[0].sym;
    if (head == "set-logic") {
      require_arity(cmd, 2);
      if (!cmd.items[1].is_symbol()) fail(cmd, "expected a logic name");
      d_prob.logic = cmd.items[1].sym;
    } else if (head == "synth-fun") {
      handle_synth(cmd, false);
    } else if (head == "synth-inv") {
      handle_synth(cmd, true);
    } else if (head == "declare-var") {
      require_arity(cmd, 3);
      declare_var(cmd.items[1], build_sort(cmd.items[2]));
    } else if (head == "declare-primed-var") {
      fail(cmd,
           "declare-primed-var is a v1 relic; declare plain variables and "
           "use inv-constraint");
    } else if (head == "define-fun") {
      handle_define_fun(cmd);
    } else if (head == "constraint") {
      require_arity(cmd, 2);
      BuildCtx ctx;
      ctx.frames.push_back(d_globals);
      Term t = build_term(cmd.items[1], ctx);
      if (!t.sort().is_bool()) fail(cmd.items[1], "constraint must be Bool");
      d_prob.constraints.push_back(t);
    } else if (head == "inv-constraint") {
      handle_inv_constraint(cmd);
    } else if (head == "check-synth") {
      d_prob.check_synth_seen = true;
    } else if (head == "set-info") {
      // Metadata; nothing to do.
    } else if (head == "set-option" || head == "set-feature") {
      d_prob.warnings.push_back("ignoring (" + head + " ...)");
    } else {
      fail(cmd, "unknown command " + head);
    }
  }

  static void require_arity(const SExpr& cmd, size_t n) {
    if (cmd.items.size() != n) {
      fail(cmd, cmd.items[0].sym + " expects " + std::to_string(n - 1) +
                    " argument(s)");
    }
  }

  Sort build_sort(const SExpr& e) {
    if (e.is_symbol()) {
      if (e.sym == "Int") return Sort::int_sort();
      if (e.sym == "Bool") return Sort::bool_sort();
      if (e.sym == "String") return Sort::string_sort();
      fail(e, "unknown sort " + e.sym);
    }
    if (e.is_list() && e.items.size() == 3 && e.items[0].is_symbol("_") &&
        e.items[1].is_symbol("BitVec") &&
        e.items[2].kind == SExpr::Kind::Int) {
      if (e.items[2].num <= 0 || e.items[2].num > 64) {
        fail(e, "unsupported bitvector width");
      }
      return Sort::bitvec(static_cast<uint32_t>(e.items[2].num));
    }
    fail(e, "expected a sort");
  }

  static bool sort_shaped(const SExpr& e) {
    if (e.is_symbol()) {
      return e.sym == "Int" || e.sym == "Bool" || e.sym == "String";
    }
    return e.is_list() && e.items.size() == 3 && e.items[0].is_symbol("_") &&
           e.items[1].is_symbol("BitVec");
  }

  void declare_var(const SExpr& name, const Sort& sort) {
    if (!name.is_symbol()) fail(name, "expected a variable name");
    if (d_globals.count(name.sym)) {
      fail(name, "variable " + name.sym + " already declared");
    }
    Term v = Term::variable(name.sym, sort);
    d_globals.emplace(name.sym, v);
    d_prob.universal_vars.push_back(v);
  }

  std::vector<Term> build_params(const SExpr& list) {
    if (!list.is_list()) fail(list, "expected a parameter list");
    std::vector<Term> params;
    for (const auto& p : list.items) {
      if (!p.is_list() || p.items.size() != 2 || !p.items[0].is_symbol()) {
        fail(p, "expected (name Sort)");
      }
      Sort s = build_sort(p.items[1]);
      for (const auto& prev : params) {
        if (prev.name() == p.items[0].sym) {
          fail(p, "duplicate parameter " + p.items[0].sym);
        }
      }
      params.push_back(Term::variable(p.items[0].sym, s));
    }
    return params;
  }

  void handle_synth(const SExpr& cmd, bool is_inv) {
    size_t min_items = is_inv ? 3u : 4u;
    if (cmd.items.size() < min_items) fail(cmd, "malformed synth command");
    if (!cmd.items[1].is_symbol()) fail(cmd.items[1], "expected a name");
    const std::string& name = cmd.items[1].sym;
    if (d_prob.find_function(name) || d_defs.count(name)) {
      fail(cmd.items[1], "name " + name + " already in use");
    }
    std::vector<Term> params = build_params(cmd.items[2]);
    Sort ret = is_inv ? Sort::bool_sort() : build_sort(cmd.items[3]);
    SynthFun f(name, std::move(params), ret);
    f.is_inv = is_inv;
    size_t gram_begin = is_inv ? 3 : 4;
    size_t trailing = cmd.items.size() - gram_begin;
    if (trailing > 2) fail(cmd, "too many grammar blocks");
    if (trailing > 0) {
      std::vector<const SExpr*> blocks;
      for (size_t i = gram_begin; i < cmd.items.size(); ++i) {
        blocks.push_back(&cmd.items[i]);
      }
      f.grammar = build_grammar(blocks, f);
    }
    d_prob.functions.push_back(std::move(f));
  }

  /**
   * Accepts predeclaration items (N Sort), flat groups (N Sort (g...)),
   * and headed groups ((N Sort) (g...)), in one or two blocks.
   */
  GrammarSpec build_grammar(const std::vector<const SExpr*>& blocks,
                            const SynthFun& f) {
    struct RawNT {
      std::string name;
      Sort sort;
      std::vector<const SExpr*> gterms;
    };
    std::vector<RawNT> nts;
    auto find_nt = [&nts](const std::string& n) -> RawNT* {
      for (auto& nt : nts) {
        if (nt.name == n) return &nt;
      }
      return nullptr;
    };
    auto declare = [&](const SExpr& at, const std::string& n,
                       const Sort& s) -> RawNT& {
      if (RawNT* existing = find_nt(n)) {
        if (existing->sort != s) fail(at, "nonterminal " + n + " redeclared");
        return *existing;
      }
      nts.push_back(RawNT{n, s, {}});
      return nts.back();
    };
    for (const SExpr* block : blocks) {
      if (!block->is_list()) fail(*block, "expected a grammar block");
      for (const auto& item : block->items) {
        if (!item.is_list() || item.items.empty()) {
          fail(item, "malformed grammar entry");
        }
        if (item.items.size() == 2 && item.items[0].is_symbol() &&
            sort_shaped(item.items[1])) {
          declare(item, item.items[0].sym, build_sort(item.items[1]));
        } else if (item.items.size() == 3 && item.items[0].is_symbol() &&
                   sort_shaped(item.items[1]) && item.items[2].is_list()) {
          RawNT& nt =
              declare(item, item.items[0].sym, build_sort(item.items[1]));
          for (const auto& g : item.items[2].items) nt.gterms.push_back(&g);
        } else if (item.items.size() == 2 && item.items[0].is_list() &&
                   item.items[0].items.size() == 2 &&
                   item.items[0].items[0].is_symbol() &&
                   sort_shaped(item.items[0].items[1]) &&
                   item.items[1].is_list()) {
          RawNT& nt = declare(item, item.items[0].items[0].sym,
                              build_sort(item.items[0].items[1]));
          for (const auto& g : item.items[1].items) nt.gterms.push_back(&g);
        } else {
          fail(item, "malformed grammar entry");
        }
      }
    }
    if (nts.empty()) fail(*blocks[0], "empty grammar");
    if (nts[0].sort != f.ret) {
      fail(*blocks[0], "start nonterminal must produce the return sort");
    }
    GrammarSpec spec;
    BuildCtx ctx;
    ctx.allow_markers = true;
    ctx.frames.emplace_back();
    for (const auto& p : f.params) ctx.frames.back().emplace(p.name(), p);
    ctx.frames.emplace_back();
    for (const auto& nt : nts) {
      ctx.frames.back().emplace(nt.name, Term::variable(nt.name, nt.sort));
    }
    for (const auto& nt : nts) {
      if (nt.gterms.empty()) {
        fail(*blocks[0], "nonterminal " + nt.name + " has no productions");
      }
      GrammarRule rule(nt.name, nt.sort);
      for (const SExpr* g : nt.gterms) {
        for (Term t : build_gterm(*g, ctx, f)) {
          if (t.sort() != nt.sort) {
            fail(*g, "production sort mismatch in " + nt.name);
          }
          rule.productions.push_back(t);
        }
      }
      spec.rules.push_back(std::move(rule));
    }
    return spec;
  }

  /** Top-level grammar term; (Variable S) expands to matching parameters. */
  std::vector<Term> build_gterm(const SExpr& g, BuildCtx& ctx,
                                const SynthFun& f) {
    if (g.is_list() && g.items.size() == 2 && g.items[0].is_symbol("Variable")) {
      Sort s = build_sort(g.items[1]);
      std::vector<Term> out;
      for (const auto& p : f.params) {
        if (p.sort() == s) out.push_back(p);
      }
      if (out.empty()) fail(g, "no parameter has sort " + s.str());
      return out;
    }
    return {build_term(g, ctx)};
  }

  void handle_define_fun(const SExpr& cmd) {
    require_arity(cmd, 5);
    if (!cmd.items[1].is_symbol()) fail(cmd.items[1], "expected a name");
    const std::string& name = cmd.items[1].sym;
    if (d_defs.count(name) || d_prob.find_function(name)) {
      fail(cmd.items[1], "name " + name + " already in use");
    }
    std::vector<Term> params = build_params(cmd.items[2]);
    Sort ret = build_sort(cmd.items[3]);
    BuildCtx ctx;
    ctx.frames.emplace_back();
    for (const auto& p : params) ctx.frames.back().emplace(p.name(), p);
    Term body = build_term(cmd.items[4], ctx);
    if (body.sort() != ret) {
      fail(cmd.items[4], "body sort " + body.sort().str() +
                             " does not match declared " + ret.str());
    }
    d_defs.emplace(name, DefinedFun{std::move(params), body});
  }

  void handle_inv_constraint(const SExpr& cmd) {
    require_arity(cmd, 5);
    for (size_t i = 1; i <= 4; ++i) {
      if (!cmd.items[i].is_symbol()) fail(cmd.items[i], "expected a name");
    }
    if (d_inv_constraint_seen) fail(cmd, "multiple inv-constraint commands");
    d_inv_constraint_seen = true;
    const SynthFun* inv = d_prob.find_function(cmd.items[1].sym);
    if (!inv || !inv->ret.is_bool()) {
      fail(cmd.items[1], "not a Bool synthesis function: " + cmd.items[1].sym);
    }
    auto lookup_def = [this](const SExpr& e) -> const DefinedFun& {
      auto it = d_defs.find(e.sym);
      if (it == d_defs.end()) fail(e, "undefined function " + e.sym);
      return it->second;
    };
    const DefinedFun& pre = lookup_def(cmd.items[2]);
    const DefinedFun& trans = lookup_def(cmd.items[3]);
    const DefinedFun& post = lookup_def(cmd.items[4]);
    size_t n = inv->params.size();
    auto check_sig = [&](const SExpr& e, const DefinedFun& d, size_t expect) {
      if (d.params.size() != expect) {
        fail(e, e.sym + " must take " + std::to_string(expect) +
                    " argument(s)");
      }
      if (!d.body.sort().is_bool()) fail(e, e.sym + " must return Bool");
      for (size_t i = 0; i < expect; ++i) {
        if (d.params[i].sort() != inv->params[i % n].sort()) {
          fail(e, e.sym + " parameter sorts do not match " + inv->name);
        }
      }
    };
    check_sig(cmd.items[2], pre, n);
    check_sig(cmd.items[3], trans, 2 * n);
    check_sig(cmd.items[4], post, n);

    std::vector<Term> vars;
    std::vector<Term> primed;
    auto fresh_global = [this](std::string base, const Sort& s) {
      while (true) {
        auto it = d_globals.find(base);
        if (it == d_globals.end()) {
          Term v = Term::variable(base, s);
          d_globals.emplace(base, v);
          d_prob.universal_vars.push_back(v);
          return v;
        }
        if (it->second.sort() == s) return it->second;
        base += "!";
      }
    };
    for (const auto& p : inv->params) {
      vars.push_back(fresh_global(p.name(), p.sort()));
    }
    for (const auto& p : inv->params) {
      primed.push_back(fresh_global(p.name() + "!", p.sort()));
    }

    auto instantiate = [](const DefinedFun& d, const std::vector<Term>& args) {
      std::unordered_map<Term, Term, TermHash> subst;
      for (size_t i = 0; i < d.params.size(); ++i) {
        subst.emplace(d.params[i], args[i]);
      }
      return substitute(d.body, subst);
    };
    std::vector<Term> both = vars;
    both.insert(both.end(), primed.begin(), primed.end());
    Term pre_t = instantiate(pre, vars);
    Term trans_t = instantiate(trans, both);
    Term post_t = instantiate(post, vars);
    Term inv_now = Term::call(inv->name, Sort::bool_sort(), vars);
    Term inv_next = Term::call(inv->name, Sort::bool_sort(), primed);

    d_prob.constraints.push_back(
        Term::apply(Op::Implies, {pre_t, inv_now}));
    d_prob.constraints.push_back(Term::apply(
        Op::Implies, {Term::apply(Op::And, {inv_now, trans_t}), inv_next}));
    d_prob.constraints.push_back(
        Term::apply(Op::Implies, {inv_now, post_t}));

    d_prob.is_invariant = true;
    d_prob.inv_pre = pre_t;
    d_prob.inv_trans = trans_t;
    d_prob.inv_post = post_t;
    d_prob.inv_state_vars = vars;
    d_prob.inv_primed_vars = primed;
  }

  Term build_term(const SExpr& e, BuildCtx& ctx) {
    switch (e.kind) {
      case SExpr::Kind::Int:
        return Term::int_const(e.num);
      case SExpr::Kind::Str:
        return Term::constant(Value(e.text));
      case SExpr::Kind::Bv:
        return Term::constant(Value(e.bv));
      case SExpr::Kind::Symbol:
        return build_symbol(e, ctx);
      case SExpr::Kind::List:
        return build_list(e, ctx);
    }
    fail(e, "unreachable");
  }

  Term build_symbol(const SExpr& e, BuildCtx& ctx) {
    if (const Term* bound = ctx.lookup(e.sym)) return *bound;
    if (e.sym == "true") return Term::true_term();
    if (e.sym == "false") return Term::false_term();
    auto def = d_defs.find(e.sym);
    if (def != d_defs.end() && def->second.params.empty()) {
      return def->second.body;
    }
    const SynthFun* f = d_prob.find_function(e.sym);
    if (f && f->params.empty()) return Term::call(f->name, f->ret, {});
    fail(e, "unknown symbol " + e.sym);
  }

  Term build_list(const SExpr& e, BuildCtx& ctx) {
    if (e.items.empty() || !e.items[0].is_symbol()) {
      fail(e, "expected an application");
    }
    const std::string& head = e.items[0].sym;
    if (head == "let") return build_let(e, ctx);
    if (head == "Constant" && ctx.allow_markers) {
      if (e.items.size() != 2) fail(e, "expected (Constant Sort)");
      return constant_slot_marker(build_sort(e.items[1]));
    }
    if (head == "Variable" && ctx.allow_markers) {
      fail(e, "(Variable Sort) is only supported as a whole production");
    }
    std::vector<Term> args;
    for (size_t i = 1; i < e.items.size(); ++i) {
      args.push_back(build_term(e.items[i], ctx));
    }
    if (head == "-" && args.size() == 1 && args[0].is_constant() &&
        args[0].value().is_int()) {
      return Term::int_const(-args[0].value().as_int());
    }
    Op op;
    if (op_by_name(head, op)) {
      if (head == "-" && args.size() == 1) op = Op::Neg;
      try {
        return Term::apply(op, args);
      } catch (const SortError& err) {
        fail(e, err.what());
      }
    }
    auto def = d_defs.find(head);
    if (def != d_defs.end()) {
      const DefinedFun& d = def->second;
      if (args.size() != d.params.size()) {
        fail(e, head + " expects " + std::to_string(d.params.size()) +
                    " argument(s)");
      }
      std::unordered_map<Term, Term, TermHash> subst;
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].sort() != d.params[i].sort()) {
          fail(e.items[i + 1], "argument sort mismatch for " + head);
        }
        subst.emplace(d.params[i], args[i]);
      }
      return substitute(d.body, subst);
    }
    if (const SynthFun* f = d_prob.find_function(head)) {
      if (args.size() != f->params.size()) {
        fail(e, head + " expects " + std::to_string(f->params.size()) +
                    " argument(s)");
      }
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].sort() != f->params[i].sort()) {
          fail(e.items[i + 1], "argument sort mismatch for " + head);
        }
      }
      return Term::call(f->name, f->ret, args);
    }
    fail(e, "unknown operator " + head);
  }

  Term build_let(const SExpr& e, BuildCtx& ctx) {
    if (e.items.size() != 3 || !e.items[1].is_list()) {
      fail(e, "expected (let ((x e) ...) body)");
    }
    std::unordered_map<std::string, Term> frame;
    for (const auto& binding : e.items[1].items) {
      if (!binding.is_list() || binding.items.size() != 2 ||
          !binding.items[0].is_symbol()) {
        fail(binding, "expected (name term)");
      }
      // Bindings see the outer scope, not each other.
      frame.emplace(binding.items[0].sym, build_term(binding.items[1], ctx));
    }
    ctx.frames.push_back(std::move(frame));
    Term body = build_term(e.items[2], ctx);
    ctx.frames.pop_back();
    return body;
  }
};

}  // namespace

Problem parse_problem(const std::string& text) {
  Lexer lexer(text);
  std::vector<SExpr> commands = lexer.read_all();
  ProblemBuilder builder;
  return builder.run(commands);
}

Problem parse_problem_file(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    buf << in.rdbuf();
  }
  return parse_problem(buf.str());
}

}  // namespace minisy
