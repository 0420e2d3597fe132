#include <catch2/catch.hpp>

#include "minisy/parser.hpp"
#include "minisy/rewriter.hpp"
#include "oracles.hpp"

using namespace minisy;

TEST_CASE("rewriting preserves meaning and is idempotent, exhaustively") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int) (y Int)) Int
  ((S Int))
  ((S Int (x y 0 1 (+ S S) (- S S)))))
(check-synth)
)");
  REQUIRE(p.functions[0].grammar.has_value());
  const GrammarSpec& spec = *p.functions[0].grammar;
  REQUIRE(spec.rules[0].productions.size() == 6);

  std::vector<oracle::Env> envs;
  for (long xv = -2; xv <= 2; ++xv) {
    for (long yv = -2; yv <= 2; ++yv) {
      oracle::Env e;
      e["x"] = Value(Integer(xv));
      e["y"] = Value(Integer(yv));
      envs.push_back(std::move(e));
    }
  }

  oracle::BruteForce bf(spec, 5);
  std::vector<Term> all = bf.all();
  CHECK(all.size() == 548);
  size_t violations = 0;
  for (const Term& t : all) {
    Term r = rewrite(t);
    if (oracle::signature(t, envs) != oracle::signature(r, envs)) ++violations;
    if (!(rewrite(r) == r)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("constants fold") {
  Term t = Term::apply(Op::Add, {Term::int_const(2), Term::int_const(3)});
  CHECK(rewrite(t) == Term::int_const(5));
  Term c = Term::apply(Op::Le, {Term::int_const(2), Term::int_const(1)});
  CHECK(rewrite(c) == Term::false_term());
}

TEST_CASE("arithmetic identities collapse") {
  Term x = Term::variable("x", Sort::int_sort());
  CHECK(rewrite(Term::apply(Op::Add, {x, Term::int_const(0)})) == x);
  CHECK(rewrite(Term::apply(Op::Sub, {x, x})) == Term::int_const(0));
  CHECK(rewrite(Term::apply(Op::Le, {x, x})) == Term::true_term());
  CHECK(rewrite(Term::apply(Op::Mul, {Term::int_const(1), x})) == x);
}

TEST_CASE("boolean structure simplifies") {
  Term p = Term::variable("p", Sort::bool_sort());
  Term q = Term::variable("q", Sort::bool_sort());
  CHECK(rewrite(Term::apply(Op::Not, {Term::apply(Op::Not, {p})})) == p);
  CHECK(rewrite(Term::apply(Op::And, {p, Term::apply(Op::Not, {p})})) ==
        Term::false_term());
  CHECK(rewrite(Term::apply(Op::Or, {p, Term::true_term()})) ==
        Term::true_term());
  Term ab = Term::apply(Op::And, {p, q});
  Term ba = Term::apply(Op::And, {q, p});
  CHECK(rewrite(ab) == rewrite(ba));
}

TEST_CASE("comparisons over one polynomial merge under conjunction") {
  Term x = Term::variable("x", Sort::int_sort());
  Term le3 = Term::apply(Op::Le, {x, Term::int_const(3)});
  Term le5 = Term::apply(Op::Le, {x, Term::int_const(5)});
  CHECK(rewrite(Term::apply(Op::And, {le3, le5})) == rewrite(le3));
  Term ge4 = Term::apply(Op::Ge, {x, Term::int_const(4)});
  CHECK(rewrite(Term::apply(Op::And, {le3, ge4})) == Term::false_term());
}

TEST_CASE("ite simplifies") {
  Term x = Term::variable("x", Sort::int_sort());
  Term y = Term::variable("y", Sort::int_sort());
  Term p = Term::variable("p", Sort::bool_sort());
  CHECK(rewrite(Term::apply(Op::Ite, {Term::true_term(), x, y})) == x);
  CHECK(rewrite(Term::apply(Op::Ite, {p, x, x})) == x);
}

TEST_CASE("string concatenation normalizes") {
  Term a = Term::variable("a", Sort::string_sort());
  Term b = Term::variable("b", Sort::string_sort());
  Term c = Term::variable("c", Sort::string_sort());
  Term empty = Term::constant(Value(CodePoints()));
  CHECK(rewrite(Term::apply(Op::StrConcat, {a, empty})) == a);
  Term l = Term::apply(Op::StrConcat, {Term::apply(Op::StrConcat, {a, b}), c});
  Term r = Term::apply(Op::StrConcat, {a, Term::apply(Op::StrConcat, {b, c})});
  CHECK(rewrite(l) == rewrite(r));
}

TEST_CASE("bitvector identities collapse") {
  Term x = Term::variable("x", Sort::bitvec(4));
  Term zero = Term::constant(Value(BitVec(4, Integer(0))));
  CHECK(rewrite(Term::apply(Op::BvXor, {x, zero})) == x);
  CHECK(rewrite(Term::apply(Op::BvOr, {x, x})) == x);
  CHECK(rewrite(Term::apply(Op::BvAnd, {x, zero})) == zero);
}

TEST_CASE("rewriting respects an explicit budget") {
  Term x = Term::variable("x", Sort::int_sort());
  Term t = x;
  for (int i = 0; i < 20; ++i) t = Term::apply(Op::Add, {t, Term::int_const(0)});
  Term limited = rewrite(t, 1);
  oracle::Env e{{"x", Value(Integer(3))}};
  CHECK(oracle::ref_eval(limited, e).as_int() == 3);
  CHECK(rewrite(t) == x);
}
