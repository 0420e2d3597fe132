#include <benchmark/benchmark.h>

#include "minisy/rewriter.hpp"

using namespace minisy;

namespace {

Term x() { return Term::variable("x", Sort::int_sort()); }
Term y() { return Term::variable("y", Sort::int_sort()); }

Term deep_sum(int depth) {
  Term t = x();
  for (int i = 0; i < depth; ++i) {
    t = Term::apply(Op::Add, {t, i % 2 ? y() : Term::int_const(i)});
  }
  return t;
}

void bm_rewrite_linear_chain(benchmark::State& state) {
  Term t = deep_sum(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rewrite(t));
  }
}

void bm_rewrite_bool_flatten(benchmark::State& state) {
  Term le = Term::apply(Op::Le, {x(), y()});
  Term ge = Term::apply(Op::Le, {y(), x()});
  Term t = Term::apply(Op::And, {le, ge});
  for (int i = 0; i < state.range(0); ++i) {
    t = Term::apply(Op::And, {t, i % 2 ? le : Term::apply(Op::Not, {ge})});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(rewrite(t));
  }
}

}  // namespace

BENCHMARK(bm_rewrite_linear_chain)->Arg(8)->Arg(64)->Arg(256);
BENCHMARK(bm_rewrite_bool_flatten)->Arg(4)->Arg(16)->Arg(64);
