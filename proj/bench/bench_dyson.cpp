// Serial per-tuple Dyson assembly vs the grouped OpenMP kernel.

#include <benchmark/benchmark.h>

#include "msgate/magnus.hpp"

using namespace msgate;

namespace {

GateParams nominal_params() {
  GateParams p;
  p.omega_T = 30.0;
  p.nbar = 0.02;
  return p;
}

void BM_Reference(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const GateParams p = nominal_params();
  const PulseShape pulse = PulseShape::rectangular();
  for (auto _ : state) benchmark::DoNotOptimize(dyson_term_reference(k, p, pulse));
}

void BM_Grouped(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  const GateParams p = nominal_params();
  const FactoredHamiltonian H(p, PulseShape::rectangular());
  for (auto _ : state) benchmark::DoNotOptimize(resonant_operator_sum(H, k, threads));
}

}  // namespace

BENCHMARK(BM_Reference)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Grouped)->ArgsProduct({{2, 3, 4, 5}, {1, 0}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
