#include <catch2/catch.hpp>
#include <set>

#include "minisy/enumerator.hpp"
#include "minisy/parser.hpp"
#include "minisy/rewriter.hpp"
#include "oracles.hpp"

using namespace minisy;

namespace {

Problem parse_plus_grammar() {
  return parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int
  ((S Int))
  ((S Int (x 0 1 (+ S S)))))
(check-synth)
)");
}

std::vector<oracle::Env> x_envs() {
  std::vector<oracle::Env> envs;
  for (long xv = -2; xv <= 2; ++xv) {
    oracle::Env e;
    e["x"] = Value(Integer(xv));
    envs.push_back(std::move(e));
  }
  return envs;
}

}  // namespace

TEST_CASE("enumeration covers exactly the brute-force semantic classes") {
  Problem p = parse_plus_grammar();
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  auto envs = x_envs();

  Enumerator en(g, f.params, EnumeratorConfig{4, 0});
  std::set<std::string> yielded_sigs;
  std::set<std::pair<std::string, std::string>> sig_and_key;
  size_t yielded = 0;
  while (auto e = en.next()) {
    Term t = unembed(*e);
    ++yielded;
    std::string sig = oracle::signature(t, envs);
    yielded_sigs.insert(sig);
    auto ins = sig_and_key.emplace(sig, rewrite(t).str());
    CHECK(ins.second);
  }
  CHECK(yielded == yielded_sigs.size());

  oracle::BruteForce bf(*f.grammar, 4);
  std::set<std::string> brute_sigs;
  for (const Term& t : bf.all()) brute_sigs.insert(oracle::signature(t, envs));

  CHECK(yielded_sigs == brute_sigs);
  CHECK(en.stats().admitted == yielded);
  CHECK(en.stats().built >= en.stats().admitted);
}

TEST_CASE("enumeration order is deterministic") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int) (y Int)) Int
  ((S Int) (B Bool))
  ((S Int (x y 0 1 (+ S S) (ite B S S)))
   (B Bool ((<= S S) (not B)))))
(check-synth)
)");
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);

  auto run = [&] {
    Enumerator en(g, f.params, EnumeratorConfig{7, 0});
    std::vector<std::string> seq;
    while (auto e = en.next()) seq.push_back(unembed(*e).str());
    return seq;
  };
  auto a = run();
  auto b = run();
  REQUIRE(a.size() > 50);
  CHECK(a == b);
}

TEST_CASE("terms come out in nondecreasing size") {
  Problem p = parse_plus_grammar();
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  Enumerator en(g, f.params, EnumeratorConfig{6, 0});
  int last = 0;
  while (auto e = en.next()) {
    CHECK((*e)->size >= last);
    last = (*e)->size;
  }
  CHECK(last <= 6);
}

TEST_CASE("a finite grammar reports full exhaustion") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((a Int)) Int
  ((S Int))
  ((S Int (0 1))))
(check-synth)
)");
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  Enumerator en(g, f.params, EnumeratorConfig{12, 0});
  std::vector<Term> got;
  while (auto e = en.next()) got.push_back(unembed(*e));
  REQUIRE(got.size() == 2);
  CHECK(en.exhausted_completely());
  CHECK_FALSE(en.stopped_at_size_cap());
}

TEST_CASE("an infinite grammar stops at the size cap instead") {
  Problem p = parse_plus_grammar();
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  Enumerator en(g, f.params, EnumeratorConfig{3, 0});
  while (en.next()) {
  }
  CHECK(en.stopped_at_size_cap());
  CHECK_FALSE(en.exhausted_completely());
}

TEST_CASE("symmetry pruning never loses the plus-grammar classes at size 5") {
  Problem p = parse_plus_grammar();
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  auto envs = x_envs();

  Enumerator en(g, f.params, EnumeratorConfig{5, 0});
  std::set<std::string> yielded_sigs;
  while (auto e = en.next()) {
    yielded_sigs.insert(oracle::signature(unembed(*e), envs));
  }
  oracle::BruteForce bf(*f.grammar, 5);
  std::set<std::string> brute_sigs;
  for (const Term& t : bf.all()) brute_sigs.insert(oracle::signature(t, envs));
  CHECK(yielded_sigs == brute_sigs);
  CHECK(en.stats().pruned_duplicate + en.stats().pruned_symmetry > 0);
}

TEST_CASE("constant holes surface once per shape") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int
  ((S Int))
  ((S Int (x (+ S (Constant Int))))))
(check-synth)
)");
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  REQUIRE(g.has_constant_slots());
  Enumerator en(g, f.params, EnumeratorConfig{4, 0});
  size_t with_holes = 0, without = 0;
  std::set<std::string> hole_shapes;
  while (auto e = en.next()) {
    if (has_holes(*e)) {
      ++with_holes;
      std::vector<Term> holes;
      Term shape = unembed_with_holes(*e, holes);
      CHECK(!holes.empty());
      CHECK(hole_shapes.insert(shape.str()).second);
    } else {
      ++without;
    }
  }
  CHECK(with_holes > 0);
  CHECK(without > 0);
}
