#include <benchmark/benchmark.h>

#include "minisy/lia.hpp"

using namespace minisy;

namespace {

Term var(const std::string& n) {
  return Term::variable(n, Sort::int_sort());
}

Term chain_constraints(int k) {
  // x0 >= 0, x_{i+1} >= x_i + 1, x_{k-1} <= 3k: satisfiable box walk
  std::vector<Term> cs;
  cs.push_back(Term::apply(Op::Le, {Term::int_const(0), var("x0")}));
  for (int i = 0; i + 1 < k; ++i) {
    Term lo = Term::apply(
        Op::Add, {var("x" + std::to_string(i)), Term::int_const(1)});
    cs.push_back(Term::apply(Op::Le, {lo, var("x" + std::to_string(i + 1))}));
  }
  cs.push_back(Term::apply(
      Op::Le, {var("x" + std::to_string(k - 1)), Term::int_const(3 * k)}));
  return Term::apply(Op::And, cs);
}

void bm_lia_chain(benchmark::State& state) {
  Term f = chain_constraints(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qf_lia_sat(f));
  }
}

}  // namespace

BENCHMARK(bm_lia_chain)->Arg(2)->Arg(6)->Arg(12)->Unit(benchmark::kMicrosecond);
