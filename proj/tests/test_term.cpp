#include <catch2/catch.hpp>

#include "minisy/eval.hpp"
#include "minisy/term.hpp"
#include "minisy/value.hpp"

using namespace minisy;

TEST_CASE("identical structure interns to the same node") {
  Term x = Term::variable("x", Sort::int_sort());
  Term a = Term::apply(Op::Add, {x, Term::int_const(1)});
  Term b = Term::apply(Op::Add, {x, Term::int_const(1)});
  CHECK(a == b);
  CHECK(TermHash{}(a) == TermHash{}(b));
  CHECK(a.str() == "(+ x 1)");
}

TEST_CASE("distinct sorts make distinct variables") {
  Term xi = Term::variable("x", Sort::int_sort());
  Term xb = Term::variable("x", Sort::bool_sort());
  CHECK_FALSE(xi == xb);
}

TEST_CASE("apply rejects ill-sorted children") {
  Term x = Term::variable("x", Sort::int_sort());
  Term p = Term::variable("p", Sort::bool_sort());
  CHECK_THROWS_AS(Term::apply(Op::Add, {x, p}), SortError);
  CHECK_THROWS_AS(Term::apply(Op::And, {x, p}), SortError);
  CHECK_THROWS_AS(Term::apply(Op::Ite, {x, x, x}), SortError);
  CHECK_NOTHROW(Term::apply(Op::Ite, {p, x, x}));
  // Multiplication is linear: one factor must be a literal.
  CHECK_THROWS_AS(Term::apply(Op::Mul, {x, x}), SortError);
  CHECK_NOTHROW(Term::apply(Op::Mul, {Term::int_const(2), x}));
}

TEST_CASE("substitute touches variables only") {
  Term x = Term::variable("x", Sort::int_sort());
  Term y = Term::variable("y", Sort::int_sort());
  Term sum = Term::apply(Op::Add, {x, y});
  std::unordered_map<Term, Term, TermHash> sub{{x, Term::int_const(3)}};
  CHECK(substitute(sum, sub).str() == "(+ 3 y)");

  std::unordered_map<Term, Term, TermHash> deep{{sum, Term::int_const(0)}};
  Term outer = Term::apply(Op::Sub, {sum, x});
  CHECK(substitute(outer, deep) == outer);
}

TEST_CASE("substitution is simultaneous") {
  Term x = Term::variable("x", Sort::int_sort());
  Term y = Term::variable("y", Sort::int_sort());
  std::unordered_map<Term, Term, TermHash> swap{{x, y}, {y, x}};
  Term t = Term::apply(Op::Sub, {x, y});
  CHECK(substitute(t, swap).str() == "(- y x)");
}

TEST_CASE("replace_subterm rewrites arbitrary subterms") {
  Term x = Term::variable("x", Sort::int_sort());
  Term sum = Term::apply(Op::Add, {x, Term::int_const(1)});
  Term outer = Term::apply(Op::Add, {sum, sum});
  Term got = replace_subterm(outer, sum, Term::int_const(7));
  CHECK(got.str() == "(+ 7 7)");
  CHECK_THROWS_AS(replace_subterm(outer, sum, Term::true_term()), SortError);
}

TEST_CASE("free variables come in first-occurrence order") {
  Term x = Term::variable("x", Sort::int_sort());
  Term y = Term::variable("y", Sort::int_sort());
  Term t = Term::apply(Op::Add, {y, Term::apply(Op::Sub, {x, y})});
  auto vars = free_variables(t);
  REQUIRE(vars.size() == 2);
  CHECK(vars[0] == y);
  CHECK(vars[1] == x);
}

TEST_CASE("calls reduce to instantiated bodies") {
  Term x = Term::variable("x", Sort::int_sort());
  Term p = Term::variable("p", Sort::int_sort());
  Term call = Term::call("f", Sort::int_sort(), {Term::int_const(5)});
  Term t = Term::apply(Op::Add, {call, x});
  Term body = Term::apply(Op::Mul, {Term::int_const(3), p});
  Term red = reduce_call(t, "f", {p}, body);
  CHECK(red.str() == "(+ (* 3 5) x)");
  CHECK_FALSE(contains_any_call(red));
}

TEST_CASE("evaluation covers the theory operators") {
  Environment env;
  env.bind("x", Value(Integer(7)));
  env.bind("s", Value(utf8_decode("ab")));
  Term x = Term::variable("x", Sort::int_sort());
  Term s = Term::variable("s", Sort::string_sort());

  CHECK(evaluate(Term::apply(Op::Add, {x, x}), env).as_int() == 14);
  CHECK(evaluate(Term::apply(Op::Le, {x, Term::int_const(7)}), env).as_bool());
  Term cat = Term::apply(Op::StrConcat, {s, s});
  CHECK(utf8_encode(evaluate(cat, env).as_string()) == "abab");
  CHECK(evaluate(Term::apply(Op::StrLen, {s}), env).as_int() == 2);

  Environment empty;
  CHECK_THROWS(evaluate(x, empty));
}

TEST_CASE("bitvector values reduce modulo their width") {
  BitVec v(4, Integer(19));
  CHECK(v.bits == 3);
  Term a = Term::constant(Value(BitVec(4, Integer(12))));
  Term b = Term::constant(Value(BitVec(4, Integer(10))));
  Environment env;
  Value sum = evaluate(Term::apply(Op::BvAdd, {a, b}), env);
  CHECK(sum.as_bitvec().bits == 6);
  Value neg = evaluate(Term::apply(Op::BvNeg, {a}), env);
  CHECK(neg.as_bitvec().bits == 4);
}

TEST_CASE("utf8 round-trips code points") {
  std::string text = "aé世b";
  CHECK(utf8_encode(utf8_decode(text)) == text);
  CHECK(utf8_decode(text).size() == 4);
}
