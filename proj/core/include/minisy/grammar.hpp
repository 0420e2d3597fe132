#ifndef MINISY_GRAMMAR_HPP
#define MINISY_GRAMMAR_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minisy/eval.hpp"
#include "minisy/term.hpp"

namespace minisy {

struct GrammarError : std::runtime_error {
  explicit GrammarError(const std::string& msg) : std::runtime_error(msg) {}
};

/**
 * A syntactic grammar as parsed from a synth-fun command. Productions are
 * terms over the function's parameters in which nonterminal occurrences
 * appear as variables named after the nonterminal, and "any constant of
 * sort T" slots appear as reserved marker variables.
 */
struct GrammarRule {
  std::string nt;
  Sort sort;
  std::vector<Term> productions;

  GrammarRule(std::string n, Sort s) : nt(std::move(n)), sort(std::move(s)) {}
};

struct GrammarSpec {
  std::vector<GrammarRule> rules;  // rules[0] is the start nonterminal

  bool empty() const { return rules.empty(); }
};

/** Placeholder standing for an arbitrary literal of the given sort. */
Term constant_slot_marker(const Sort& s);
bool is_constant_slot_marker(const Term& t);

/**
 * One production embedded as a datatype constructor. The analog rebuilds
 * the concrete term: slot variables stand for the constructor's children
 * and everything else (parameters, literals, fixed operators) is kept
 * verbatim. Constant-slot constructors have no analog shape; they carry
 * a literal chosen later.
 */
struct Constructor {
  std::string name;
  Sort sort = Sort::bool_sort();  // sort of the terms this produces
  Term analog;
  std::vector<Term> slots;      // one distinct variable per child, in order
  std::vector<int> child_nts;   // nonterminal index per child
  bool is_constant_slot = false;

  size_t arity() const { return child_nts.size(); }
};

struct NonterminalInfo {
  std::string name;
  Sort sort;
  std::vector<Constructor> constructors;

  NonterminalInfo(std::string n, Sort s)
      : name(std::move(n)), sort(std::move(s)) {}
};

/**
 * A grammar embedded as a family of mutually recursive algebraic
 * datatypes, one per nonterminal; constructors one per production.
 * Candidate terms are values of these datatypes, sized by constructor
 * count, and are mapped back to concrete terms through the analogs.
 */
class DatatypeGrammar {
 public:
  /** Embeds a parsed grammar. Nonterminal 0 stays the start symbol. */
  static DatatypeGrammar embed(const GrammarSpec& spec,
                               const std::vector<Term>& params);

  /**
   * Builds the fallback grammar used when a synth-fun declares no
   * syntactic restriction: per-sort nonterminals over the parameters,
   * basic literals plus the given extras, and the core operators of
   * each sort, with ite everywhere.
   */
  static DatatypeGrammar default_for(const std::vector<Term>& params,
                                     const Sort& ret,
                                     const std::vector<Value>& extra_literals);

  size_t num_nonterminals() const { return d_nts.size(); }
  const NonterminalInfo& nt(size_t i) const { return d_nts[i]; }
  int start() const { return 0; }
  bool from_explicit_spec() const { return d_explicit; }
  /** True when some production admits an arbitrary literal. */
  bool has_constant_slots() const { return d_has_const_slots; }
  /** Index of the first Bool-sorted nonterminal, or -1. */
  int bool_nonterminal() const;
  /** True when the nonterminal has an ite-rooted production. */
  bool nt_has_ite(int nt_index) const;

 private:
  std::vector<NonterminalInfo> d_nts;
  bool d_explicit = false;
  bool d_has_const_slots = false;
};

/**
 * A candidate: a value of the embedded datatypes. Constant-slot nodes
 * either carry a chosen literal or are still open holes.
 */
struct EmbeddedTerm;
using EmbeddedRef = std::shared_ptr<const EmbeddedTerm>;

struct EmbeddedTerm {
  int nt;
  int ctor_index;
  const Constructor* ctor;
  std::vector<EmbeddedRef> children;
  std::optional<Value> const_value;
  int size;  // constructor applications in this value
};

EmbeddedRef make_embedded(const DatatypeGrammar& g, int nt, int ctor_index,
                          std::vector<EmbeddedRef> children);
/** An open constant slot (hole) of the given nonterminal. */
EmbeddedRef make_const_hole(const DatatypeGrammar& g, int nt, int ctor_index);
/** A filled constant slot. */
EmbeddedRef make_const_value(const DatatypeGrammar& g, int nt, int ctor_index,
                             Value v);

bool has_holes(const EmbeddedRef& e);

/** Maps the candidate back to a concrete term. Throws on open holes. */
Term unembed(const EmbeddedRef& e);

/**
 * Like unembed, but each open hole becomes a fresh variable. The hole
 * variables are appended to `holes` in left-to-right traversal order.
 */
Term unembed_with_holes(const EmbeddedRef& e, std::vector<Term>& holes);

/** Replaces the i-th hole (same traversal order) with the i-th value. */
EmbeddedRef fill_holes(const EmbeddedRef& e, const std::vector<Value>& vals);

/**
 * Evaluates the candidate under env without materializing the concrete
 * term, by binding each constructor's slot variables to the child
 * values. Throws EvalError on open holes.
 */
Value eval_embedded(const EmbeddedRef& e, const Environment& env);

/**
 * Whether `t` can be produced by the grammar starting from nonterminal
 * `nt`, by structural matching against the production shapes (constant
 * slots accept any literal of their sort).
 */
bool grammar_derivable(const DatatypeGrammar& g, const Term& t, size_t nt);

}  // namespace minisy

#endif
