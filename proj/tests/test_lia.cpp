#include <catch2/catch.hpp>
#include <random>

#include "minisy/lia.hpp"
#include "oracles.hpp"

using namespace minisy;

namespace {

Term var(const char* n) { return Term::variable(n, Sort::int_sort()); }

Term atom(std::mt19937_64& rng, const std::vector<Term>& vars) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> cst(-6, 6);
  std::uniform_int_distribution<int> rel(0, 4);
  Term lhs = Term::int_const(0);
  for (const Term& v : vars) {
    int c = coef(rng);
    if (c == 0) continue;
    lhs = Term::apply(Op::Add,
                      {lhs, Term::apply(Op::Mul, {Term::int_const(c), v})});
  }
  Term rhs = Term::int_const(cst(rng));
  switch (rel(rng)) {
    case 0: return Term::apply(Op::Le, {lhs, rhs});
    case 1: return Term::apply(Op::Lt, {lhs, rhs});
    case 2: return Term::apply(Op::Ge, {lhs, rhs});
    case 3: return Term::apply(Op::Gt, {lhs, rhs});
    default: return Term::apply(Op::Eq, {lhs, rhs});
  }
}

Term formula(std::mt19937_64& rng, const std::vector<Term>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 0);
  switch (pick(rng)) {
    case 1:
      return Term::apply(Op::And, {formula(rng, vars, depth - 1),
                                   formula(rng, vars, depth - 1)});
    case 2:
      return Term::apply(Op::Or, {formula(rng, vars, depth - 1),
                                  formula(rng, vars, depth - 1)});
    case 3:
      return Term::apply(Op::Not, {formula(rng, vars, depth - 1)});
    default:
      return atom(rng, vars);
  }
}

}  // namespace

TEST_CASE("random formulas agree with the boxed reference search") {
  std::vector<Term> vars{var("x"), var("y")};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 120; ++i) {
    Term f = formula(rng, vars, 3);
    LiaResult res = qf_lia_sat(f);
    auto boxed = oracle::find_model_in_box(f, -8, 8);
    if (res.unsat()) {
      CHECK_FALSE(boxed.has_value());
    } else if (boxed) {
      REQUIRE(res.sat());
    }
    if (res.sat()) {
      oracle::Env env;
      for (const Term& v : vars) {
        const Value* got = res.model.lookup(v.name());
        env[v.name()] = got ? *got : Value(Integer(0));
      }
      CHECK(oracle::ref_eval(f, env).as_bool());
    }
  }
}

TEST_CASE("classic unsatisfiable systems refute") {
  Term x = var("x");
  Term y = var("y");
  Term two_x = Term::apply(Op::Mul, {Term::int_const(2), x});
  // 2x = 3 has no integer solution
  CHECK(qf_lia_sat(Term::apply(Op::Eq, {two_x, Term::int_const(3)})).unsat());
  // x <= 0 and x >= 1
  Term c = Term::apply(Op::And, {Term::apply(Op::Le, {x, Term::int_const(0)}),
                                 Term::apply(Op::Ge, {x, Term::int_const(1)})});
  CHECK(qf_lia_sat(c).unsat());
  // x = 2y and x = 2y + 1
  Term e1 = Term::apply(Op::Eq, {x, Term::apply(Op::Mul, {Term::int_const(2), y})});
  Term e2 = Term::apply(
      Op::Eq, {x, Term::apply(Op::Add, {Term::apply(Op::Mul,
                                                    {Term::int_const(2), y}),
                                        Term::int_const(1)})});
  CHECK(qf_lia_sat(Term::apply(Op::And, {e1, e2})).unsat());
}

TEST_CASE("integrality cuts off the rational relaxation") {
  Term x = var("x");
  Term y = var("y");
  // 2x + 2y = 1 is rationally satisfiable but has no integer point
  Term t = Term::apply(
      Op::Eq,
      {Term::apply(Op::Add, {Term::apply(Op::Mul, {Term::int_const(2), x}),
                             Term::apply(Op::Mul, {Term::int_const(2), y})}),
       Term::int_const(1)});
  CHECK(qf_lia_sat(t).unsat());
}

TEST_CASE("boolean variables mix with arithmetic atoms") {
  Term b = Term::variable("b", Sort::bool_sort());
  Term x = var("x");
  Term f = Term::apply(
      Op::And,
      {Term::apply(Op::Or, {b, Term::apply(Op::Ge, {x, Term::int_const(5)})}),
       Term::apply(Op::Not, {b}),
       Term::apply(Op::Le, {x, Term::int_const(4)})});
  CHECK(qf_lia_sat(f).unsat());

  Term g = Term::apply(
      Op::And,
      {Term::apply(Op::Or, {b, Term::apply(Op::Ge, {x, Term::int_const(5)})}),
       Term::apply(Op::Not, {b})});
  LiaResult res = qf_lia_sat(g);
  REQUIRE(res.sat());
  CHECK_FALSE(res.model.lookup("b")->as_bool());
  CHECK(res.model.lookup("x")->as_int() >= 5);
}

TEST_CASE("disequalities split into both directions") {
  Term x = var("x");
  Term ne = Term::apply(Op::Not, {Term::apply(Op::Eq, {x, Term::int_const(0)})});
  Term bounded = Term::apply(
      Op::And, {ne, Term::apply(Op::Ge, {x, Term::int_const(0)}),
                Term::apply(Op::Le, {x, Term::int_const(1)})});
  LiaResult res = qf_lia_sat(bounded);
  REQUIRE(res.sat());
  CHECK(res.model.lookup("x")->as_int() == 1);
}

TEST_CASE("large coefficients stay exact") {
  Term x = var("x");
  Integer big("1000000000000000000000");
  Term t = Term::apply(
      Op::And,
      {Term::apply(Op::Ge, {x, Term::constant(Value(big))}),
       Term::apply(Op::Le, {x, Term::constant(Value(Integer(big + 1)))})});
  LiaResult res = qf_lia_sat(t);
  REQUIRE(res.sat());
  CHECK(res.model.lookup("x")->as_int() >= big);
}

TEST_CASE("structure outside the fragment reports unknown, not a verdict") {
  Term x = var("x");
  Term call = Term::call("f", Sort::int_sort(), {x});
  Term with_call = Term::apply(Op::Ge, {call, Term::int_const(0)});
  LiaResult res = qf_lia_sat(with_call);
  CHECK(res.status == LiaStatus::Unknown);
  CHECK(!res.reason.empty());
}

TEST_CASE("ite and implies act as connectives") {
  Term x = var("x");
  Term p = Term::variable("p", Sort::bool_sort());
  Term f = Term::apply(
      Op::And,
      {Term::apply(Op::Ite, {p, Term::apply(Op::Ge, {x, Term::int_const(3)}),
                             Term::apply(Op::Le, {x, Term::int_const(-3)})}),
       Term::apply(Op::Implies, {p, Term::apply(Op::Le, {x, Term::int_const(2)})}),
       p});
  CHECK(qf_lia_sat(f).unsat());
}
