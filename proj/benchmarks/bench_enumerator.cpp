#include <benchmark/benchmark.h>

#include "minisy/enumerator.hpp"
#include "minisy/parser.hpp"

using namespace minisy;

namespace {

const char* kLiaProblem = R"((set-logic LIA)
(synth-fun f ((x Int) (y Int)) Int
  ((S Int) (B Bool))
  ((S Int (x y 0 1 (+ S S) (- S S) (ite B S S)))
   (B Bool ((<= S S) (= S S) (and B B) (not B)))))
(check-synth)
)";

void bm_enumerate_lia(benchmark::State& state) {
  Problem p = parse_problem(kLiaProblem);
  const SynthFun& f = p.functions[0];
  DatatypeGrammar g = DatatypeGrammar::embed(*f.grammar, f.params);
  for (auto _ : state) {
    Enumerator en(g, f.params, EnumeratorConfig{int(state.range(0)), 0});
    size_t count = 0;
    while (en.next()) ++count;
    benchmark::DoNotOptimize(count);
  }
}

}  // namespace

BENCHMARK(bm_enumerate_lia)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
