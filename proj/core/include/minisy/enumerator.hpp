#ifndef MINISY_ENUMERATOR_HPP
#define MINISY_ENUMERATOR_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "minisy/grammar.hpp"

namespace minisy {

struct EnumeratorConfig {
  int max_size = 12;       // largest candidate, in constructor applications
  uint64_t seed = 0;       // sample-environment generator seed
};

/**
 * Size-ordered exhaustive enumeration of embedded grammar terms with
 * redundancy elimination. Candidates are built bottom-up per nonterminal
 * and per size from previously admitted subterms. A candidate is admitted
 * unless a previously admitted one shares its rewritten normal form;
 * evaluation signatures over deterministic sample environments prefilter
 * the common case. Statically forbidden (parent constructor, child
 * position, child constructor) triples prune compositions that identity,
 * absorbing-element, and reassociation reasoning shows redundant.
 *
 * Candidates containing open constant holes are deduplicated by normal
 * form alone, with holes replaced by position-canonical variables.
 */
class Enumerator {
 public:
  Enumerator(const DatatypeGrammar& g, const std::vector<Term>& params,
             EnumeratorConfig cfg = {});

  /** Next admitted start-symbol candidate in size order, or nullopt. */
  std::optional<EmbeddedRef> next();

  /** True when the grammar can produce nothing further at any size. */
  bool exhausted_completely() const { return d_exhausted; }
  /** True when enumeration stopped at the configured size cap. */
  bool stopped_at_size_cap() const { return d_capped; }

  /** Builds pools through size k; false once nothing more can appear. */
  bool ensure_level(int k);
  int built_levels() const { return d_built; }
  const std::vector<EmbeddedRef>& level_pool(int nt, int k) const;

  const std::vector<Environment>& sample_envs() const { return d_envs; }

  struct Stats {
    uint64_t built = 0;
    uint64_t admitted = 0;
    uint64_t pruned_duplicate = 0;
    uint64_t pruned_symmetry = 0;
  };
  const Stats& stats() const { return d_stats; }

 private:
  struct NtState {
    std::vector<std::vector<EmbeddedRef>> levels;  // levels[k], k >= 1
    // Admitted candidates bucketed by evaluation signature; normal forms
    // are only computed and compared within a bucket.
    std::unordered_map<std::string, std::vector<EmbeddedRef>> by_sig;
    std::unordered_set<Term, TermHash> hole_key_seen;
  };

  const DatatypeGrammar& d_grammar;
  EnumeratorConfig d_cfg;
  std::vector<Environment> d_envs;
  std::vector<NtState> d_state;
  std::unordered_set<uint64_t> d_forbidden;
  Stats d_stats;
  int d_built = 0;            // highest fully built level
  int d_last_productive = 0;  // highest level with any admission
  size_t d_max_arity = 0;
  bool d_exhausted = false;
  bool d_capped = false;
  int d_cursor_size = 1;
  size_t d_cursor_idx = 0;

  void derive_symmetry_rules();
  void build_sample_envs(const std::vector<Term>& params);
  bool forbidden(int nt, int ctor, size_t pos, int child_ctor) const;
  void build_level(int k);
  void admit(int nt, const EmbeddedRef& e);
  void enumerate_ctor(int nt, int ctor_index, int k);
};

}  // namespace minisy

#endif
