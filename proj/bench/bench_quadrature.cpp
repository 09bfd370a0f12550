// Serial pointwise reference vs the OpenMP slab kernel on the same grid.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "dicke/coherent.hpp"
#include "dicke/measures.hpp"
#include "dicke/variational.hpp"

using namespace dicke;

namespace {

const GroundState& state() {
  static GroundState gs = ground_state(DickeParams::make(1, 1, 1.0, 20, 60));
  return gs;
}

ProductGrid grid(const PhaseDensity& phi, int nodes) {
  QuadratureSpec q;
  q.nodes_per_axis = nodes;
  return make_grid(q, phi.layout());
}

void BM_NumericSerial(benchmark::State& st) {
  NumericHusimi phi(state());
  auto g = grid(phi, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(integrate_grid_serial(phi, g, kDefaultNus).norm);
  st.counters["nodes"] = static_cast<double>(g.size());
}

void BM_NumericSlabs(benchmark::State& st) {
  NumericHusimi phi(state());
  auto g = grid(phi, static_cast<int>(st.range(0)));
  const int threads = st.range(1) == 0 ? omp_get_max_threads() : static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(integrate_grid(phi, g, kDefaultNus, threads).norm);
  st.counters["nodes"] = static_cast<double>(g.size());
  st.counters["threads"] = threads;
}

void BM_AnsatzSlabs(benchmark::State& st) {
  AnsatzHusimi phi(AnsatzState::make(DickeParams::make(1, 1, 1.0, 20, 0)));
  auto g = grid(phi, static_cast<int>(st.range(0)));
  const int threads = st.range(1) == 0 ? omp_get_max_threads() : static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(integrate_grid(phi, g, kDefaultNus, threads).norm);
  st.counters["threads"] = threads;
}

}  // namespace

BENCHMARK(BM_NumericSerial)->Arg(17)->Arg(25)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NumericSlabs)->Args({17, 1})->Args({25, 1})->Args({17, 0})->Args({25, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnsatzSlabs)->Args({25, 1})->Args({25, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
