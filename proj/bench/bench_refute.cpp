#include <benchmark/benchmark.h>

#include <omp.h>

#include "foasl/models.hpp"
#include "foasl/theories.hpp"

using namespace foasl;

namespace {

// A theorem under the finite part of the heap theory: every sample is
// evaluated in full, so no early exit hides the kernel cost.
struct Workload {
  Formula goal = parse_formula("((E x1. (x1 |-> a) * true) -> false) -> ((x |-> y) -> false)");
  TheorySet theory;

  Workload() {
    for (int n : {1, 2, 3, 4, 6}) theory.add(theory_formula(n, 2), {n, 2});
    algebras_of_size(5);  // build the catalog outside the timed loops
  }
};

const Workload& work() {
  static const Workload w;
  return w;
}

void BM_RefuteSerial(benchmark::State& st) {
  const auto& w = work();
  for (auto _ : st)
    benchmark::DoNotOptimize(refute_serial(w.goal, w.theory, 1, st.range(0), {4, 3}));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_RefuteParallel(benchmark::State& st) {
  const auto& w = work();
  omp_set_num_threads(static_cast<int>(st.range(1)));
  for (auto _ : st)
    benchmark::DoNotOptimize(refute(w.goal, w.theory, 1, st.range(0), {4, 3}));
  st.SetItemsProcessed(st.iterations() * st.range(0));
  st.counters["threads"] = static_cast<double>(st.range(1));
}

}  // namespace

BENCHMARK(BM_RefuteSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RefuteParallel)
    ->ArgsProduct({{100, 1000}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
