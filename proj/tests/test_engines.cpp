#include <catch2/catch.hpp>

#include "minisy/parser.hpp"
#include "minisy/single_invocation.hpp"
#include "minisy/solver.hpp"
#include "minisy/verifier.hpp"
#include "oracles.hpp"

using namespace minisy;

namespace {

SolveReport run(const std::string& text, Strategy s = Strategy::Auto) {
  Problem p = parse_problem(text);
  SolverConfig cfg;
  cfg.strategy = s;
  cfg.timeout_ms = 20000;
  Solver solver(p, cfg);
  return solver.solve();
}

void check_solution(const std::string& text, const SolveReport& r) {
  REQUIRE(r.outcome.kind == SolveOutcome::Kind::Solution);
  Problem p = parse_problem(text);
  Verifier v(p);
  VerifyResult res = v.check({{p.functions[0].name, r.outcome.body}});
  CHECK(res.valid());
}

}  // namespace

static const char* kConst101 = R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int
  ((S Int))
  ((S Int (x (+ S (Constant Int))))))
(declare-var x Int)
(constraint (> (f x) (+ x 100)))
(check-synth)
)";

TEST_CASE("constant repair closes a quantified gap") {
  SolveReport r = run(kConst101, Strategy::Fast);
  check_solution(kConst101, r);
  oracle::Env e{{"x", Value(Integer(0))}};
  Integer c = oracle::ref_eval(r.outcome.body, e).as_int();
  CHECK(c >= 101);
  for (long xv : {-7L, 1L, 12L}) {
    oracle::Env env{{"x", Value(Integer(xv))}};
    CHECK(oracle::ref_eval(r.outcome.body, env).as_int() == xv + c);
  }
}

static const char* kMax2 = R"(
(set-logic LIA)
(synth-fun max2 ((x Int) (y Int)) Int
  ((S Int) (B Bool))
  ((S Int (x y 0 1 (+ S S) (ite B S S)))
   (B Bool ((<= S S)))))
(declare-var x Int)
(declare-var y Int)
(constraint (>= (max2 x y) x))
(constraint (>= (max2 x y) y))
(constraint (or (= (max2 x y) x) (= (max2 x y) y)))
(check-synth)
)";

TEST_CASE("single-invocation problems solve by instantiation") {
  Problem p = parse_problem(kMax2);
  auto si = detect_single_invocation(p, p.functions[0]);
  REQUIRE(si.has_value());
  CHECK(si->args.size() == 2);

  SolveReport r = run(kMax2, Strategy::Si);
  CHECK(r.stats.strategy == "instantiation");
  check_solution(kMax2, r);
  for (long a = -4; a <= 4; ++a) {
    for (long b = -4; b <= 4; ++b) {
      oracle::Env e{{"x", Value(Integer(a))}, {"y", Value(Integer(b))}};
      CHECK(oracle::ref_eval(r.outcome.body, e).as_int() == std::max(a, b));
    }
  }
}

TEST_CASE("calls on shifted arguments are not single-invocation") {
  Problem p = parse_problem(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int)
(declare-var x Int)
(constraint (= (f x) (f (+ x 1))))
(check-synth)
)");
  CHECK_FALSE(detect_single_invocation(p, p.functions[0]).has_value());
}

TEST_CASE("pointwise contradictions prove infeasibility") {
  SolveReport r = run(R"(
(set-logic LIA)
(synth-fun f ((x Int)) Int
  ((S Int))
  ((S Int (x 0 1 (+ S S)))))
(declare-var x Int)
(constraint (and (= (f x) 0) (= (f x) 1)))
(check-synth)
)");
  CHECK(r.outcome.kind == SolveOutcome::Kind::Infeasible);
}

TEST_CASE("a finite grammar that cannot fit is reported infeasible") {
  SolveReport r = run(R"(
(set-logic LIA)
(synth-fun f ((a Int)) Int
  ((S Int))
  ((S Int (0 1))))
(declare-var a Int)
(constraint (> (f a) a))
(check-synth)
)");
  CHECK(r.outcome.kind == SolveOutcome::Kind::Infeasible);
}

static const char* kFirstWord = R"(
(set-logic SLIA)
(synth-fun f ((x String)) String
  ((S String) (I Int))
  ((S String (x " " (str.++ S S) (str.substr S I I)))
   (I Int (0 1 (str.indexof S S I)))))
(constraint (= (f "hello world") "hello"))
(constraint (= (f "one two three") "one"))
(constraint (= (f "synthesis rocks") "synthesis"))
(constraint (= (f "a b") "a"))
(check-synth)
)";

TEST_CASE("string examples solve by example-directed search") {
  SolveReport r = run(kFirstWord);
  check_solution(kFirstWord, r);
  CHECK(r.stats.strategy == "examples");
  oracle::Env e{{"x", Value(utf8_decode("alpha beta"))}};
  CHECK(utf8_encode(oracle::ref_eval(r.outcome.body, e).as_string()) ==
        "alpha");
}

TEST_CASE("contradictory examples are infeasible") {
  SolveReport r = run(R"(
(set-logic SLIA)
(synth-fun f ((x String)) String
  ((S String))
  ((S String (x (str.++ S S)))))
(constraint (= (f "a") "x"))
(constraint (= (f "a") "y"))
(check-synth)
)");
  CHECK(r.outcome.kind == SolveOutcome::Kind::Infeasible);
}

static const char* kCounter = R"(
(set-logic LIA)
(synth-inv inv-f ((x Int))
  ((B Bool) (S Int))
  ((B Bool ((<= S S) (= S S) (and B B) (or B B) (not B)))
   (S Int (x 0 1 10 (+ S S)))))
(define-fun pre-f ((x Int)) Bool (= x 0))
(define-fun trans-f ((x Int) (x! Int)) Bool (and (= x! (+ x 1)) (< x 10)))
(define-fun post-f ((x Int)) Bool (<= x 10))
(inv-constraint inv-f pre-f trans-f post-f)
(check-synth)
)";

TEST_CASE("the counter invariant comes out under both strategies") {
  for (Strategy s : {Strategy::Fast, Strategy::Unif}) {
    SolveReport r = run(kCounter, s);
    check_solution(kCounter, r);
    for (long xv = -20; xv <= 20; ++xv) {
      oracle::Env now{{"x", Value(Integer(xv))}};
      oracle::Env next{{"x", Value(Integer(xv + 1))}};
      bool inv_now = oracle::ref_eval(r.outcome.body, now).as_bool();
      bool inv_next = oracle::ref_eval(r.outcome.body, next).as_bool();
      if (xv == 0) CHECK(inv_now);
      if (inv_now && xv < 10) CHECK(inv_next);
      if (inv_now) CHECK(xv <= 10);
    }
  }
}

TEST_CASE("conflicting invariant requirements are infeasible") {
  SolveReport r = run(R"(
(set-logic LIA)
(synth-inv inv-f ((x Int))
  ((B Bool) (S Int))
  ((B Bool ((<= S S) (and B B)))
   (S Int (x 0 1 (+ S S)))))
(define-fun pre-f ((x Int)) Bool (= x 0))
(define-fun trans-f ((x Int) (x! Int)) Bool (= x! x))
(define-fun post-f ((x Int)) Bool (>= x 1))
(inv-constraint inv-f pre-f trans-f post-f)
(check-synth)
)");
  CHECK(r.outcome.kind == SolveOutcome::Kind::Infeasible);
}

TEST_CASE("forced strategies that do not fit degrade with a warning") {
  SolveReport r = run(kConst101, Strategy::Unif);
  CHECK(!r.warnings.empty());
  check_solution(kConst101, r);
}

TEST_CASE("strategy names parse and reject typos") {
  CHECK(strategy_from_name("auto") == Strategy::Auto);
  CHECK(strategy_from_name("fast") == Strategy::Fast);
  CHECK(strategy_from_name("si") == Strategy::Si);
  CHECK(strategy_from_name("pbe") == Strategy::Pbe);
  CHECK(strategy_from_name("unif") == Strategy::Unif);
  CHECK_THROWS_AS(strategy_from_name("cegqi"), std::invalid_argument);
}

TEST_CASE("bitvector identities synthesize enumeratively") {
  const char* text = R"(
(set-logic BV)
(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4)
  ((S (_ BitVec 4)))
  ((S (_ BitVec 4) (x #x0 #xf (bvand S S) (bvor S S) (bvxor S S)))))
(declare-var x (_ BitVec 4))
(constraint (= (f x) (bvor x (bvxor x x))))
(check-synth)
)";
  SolveReport r = run(text);
  check_solution(text, r);
  for (long v = 0; v < 16; ++v) {
    oracle::Env e{{"x", Value(BitVec(4, Integer(v)))}};
    CHECK(oracle::ref_eval(r.outcome.body, e).as_bitvec().bits == v);
  }
}

TEST_CASE("solutions are deterministic for a fixed seed") {
  auto once = [&](uint64_t seed) {
    Problem p = parse_problem(kMax2);
    SolverConfig cfg;
    cfg.seed = seed;
    Solver s(p, cfg);
    return s.solve().outcome.body.str();
  };
  CHECK(once(0) == once(0));
  CHECK(once(7) == once(7));
}
