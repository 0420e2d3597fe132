#include <catch2/catch.hpp>

#include "minisy/parser.hpp"
#include "minisy/verifier.hpp"
#include "oracles.hpp"

using namespace minisy;

namespace {

std::unordered_map<std::string, Term> body_of(const Problem& p, Term b) {
  return {{p.functions[0].name, b}};
}

}  // namespace

TEST_CASE("ground constraints check by direct evaluation") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int)
(constraint (= (f 3) 9))
(constraint (= (f 0) 0))
(check-synth)
)");
  Verifier v(p);
  Term x = p.functions[0].params[0];
  Term sq3 = Term::apply(Op::Mul, {Term::int_const(3), x});
  VerifyResult good = v.check(body_of(p, sq3));
  CHECK(good.valid());
  CHECK(good.exact);

  VerifyResult bad = v.check(body_of(p, x));
  CHECK(bad.refuted());
  CHECK(bad.exact);
}

TEST_CASE("linear reasoning proves universally quantified constraints") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int)
(declare-var x Int)
(constraint (>= (f x) x))
(constraint (>= (f x) 0))
(check-synth)
)");
  Verifier v(p);
  Term x = p.functions[0].params[0];
  Term relu = Term::apply(Op::Ite,
                          {Term::apply(Op::Le, {x, Term::int_const(0)}),
                           Term::int_const(0), x});
  VerifyResult good = v.check(body_of(p, relu));
  CHECK(good.valid());
  CHECK(good.exact);

  VerifyResult bad = v.check(body_of(p, x));
  REQUIRE(bad.refuted());
  const Value* cex = bad.counterexample.lookup("x");
  REQUIRE(cex != nullptr);
  CHECK(cex->as_int() < 0);
}

TEST_CASE("counterexamples are genuine under direct evaluation") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int) (y Int)) Int)
(declare-var x Int)
(declare-var y Int)
(constraint (>= (f x y) x))
(constraint (>= (f x y) y))
(check-synth)
)");
  Verifier v(p);
  VerifyResult bad = v.check(body_of(p, p.functions[0].params[0]));
  REQUIRE(bad.refuted());
  oracle::Env env;
  for (const auto& [name, val] : bad.counterexample.bindings())
    env[name] = val;
  Term inst = v.instantiate(body_of(p, p.functions[0].params[0]));
  CHECK_FALSE(oracle::ref_eval(inst, env).as_bool());
}

TEST_CASE("conditionals inside atoms are handled exactly") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int)
(declare-var x Int)
(constraint (>= (f x) x))
(constraint (>= (f x) (- 0 x)))
(check-synth)
)");
  Verifier v(p);
  Term x = p.functions[0].params[0];
  Term abs = Term::apply(Op::Ite,
                         {Term::apply(Op::Le, {Term::int_const(0), x}), x,
                          Term::apply(Op::Sub, {Term::int_const(0), x})});
  VerifyResult res = v.check(body_of(p, abs));
  CHECK(res.valid());
  CHECK(res.exact);
}

TEST_CASE("ite lifting preserves meaning") {
  Term x = Term::variable("x", Sort::int_sort());
  Term cond = Term::apply(Op::Le, {x, Term::int_const(0)});
  Term ite = Term::apply(Op::Ite, {cond, Term::int_const(0), x});
  Term f = Term::apply(Op::Ge, {ite, Term::int_const(-1)});
  Term lifted = lift_int_ites(f);
  for (long v = -3; v <= 3; ++v) {
    oracle::Env e{{"x", Value(Integer(v))}};
    CHECK(oracle::ref_eval(f, e) == oracle::ref_eval(lifted, e));
  }
}

TEST_CASE("bitvector constraints fall to exhaustive small-domain search") {
  Problem p = parse_problem(R"(
(set-logic BV)
(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4))
(declare-var x (_ BitVec 4))
(constraint (= (f x) (bvadd x x)))
(check-synth)
)");
  Verifier v(p);
  Term x = p.functions[0].params[0];
  VerifyResult good = v.check(body_of(p, Term::apply(Op::BvAdd, {x, x})));
  CHECK(good.valid());
  CHECK(good.exact);

  VerifyResult bad = v.check(body_of(p, x));
  REQUIRE(bad.refuted());
  CHECK(bad.counterexample.lookup("x") != nullptr);
}

TEST_CASE("identity-shaped string constraints prove by normalization") {
  Problem p = parse_problem(R"(
(set-logic SLIA)
(synth-fun f ((x String)) String)
(declare-var x String)
(constraint (= (str.len (f x)) (str.len x)))
(check-synth)
)");
  Verifier v(p);
  Term x = p.functions[0].params[0];
  VerifyResult res = v.check(body_of(p, x));
  CHECK(res.valid());

  Term bad = Term::apply(Op::StrConcat,
                         {x, Term::constant(Value(utf8_decode("!")))});
  VerifyResult ref = v.check(body_of(p, bad));
  CHECK(ref.refuted());
}

TEST_CASE("unbounded string sweeps stay honest") {
  Problem p = parse_problem(R"(
(set-logic SLIA)
(synth-fun f ((x String)) String)
(declare-var x String)
(constraint (or (= (f x) "") (>= (str.len (f x)) 1)))
(check-synth)
)");
  Verifier v(p);
  Term x = p.functions[0].params[0];
  VerifyResult res = v.check(body_of(p, x));
  // Semantically valid, but no finite sweep can cover every string.
  CHECK(res.status == VerifyStatus::Unknown);
}

TEST_CASE("integer boxes obey the configured bound") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int)
(declare-var x Int)
(constraint (or (<= x (- 100)) (>= (f x) x)))
(check-synth)
)");
  Term x = p.functions[0].params[0];
  // Wrong only at points below -100, outside the small box.
  Term body = Term::apply(Op::Ite,
                          {Term::apply(Op::Le, {x, Term::int_const(-100)}),
                           Term::int_const(0), x});
  VerifierConfig narrow;
  narrow.int_bound = 8;
  Verifier v(p, narrow);
  VerifyResult res = v.check(body_of(p, body));
  CHECK(res.valid());
}
