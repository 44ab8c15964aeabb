#include <random>

#include <benchmark/benchmark.h>

#include "thetamirror/lattice.hpp"
#include "thetamirror/mirror.hpp"
#include "thetamirror/periods.hpp"
#include "thetamirror/scattering.hpp"

using namespace theta;

namespace {

// Fresh algebra each iteration, so the structure constant cache starts cold.
void BM_StructureConstants(benchmark::State& st) {
  AffineSurface s = p2_line_conic();
  const std::int64_t order = st.range(0);
  auto diagram = builtin_diagram(s, order);
  for (auto _ : st) {
    ThetaAlgebra alg(s, diagram);
    benchmark::DoNotOptimize(alg.basis_product({0, {1, 1}}, {1, {2, 1}}));
  }
}
BENCHMARK(BM_StructureConstants)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_Trace(benchmark::State& st) {
  AffineSurface s = p2_line_conic();
  const int k = static_cast<int>(st.range(0));
  std::vector<BDirection> in(k, BDirection{0, {1, 0}});
  in.insert(in.end(), 2 * k, BDirection{0, {0, 1}});
  for (auto _ : st) {
    ThetaAlgebra alg(s, builtin_diagram(s, k + 1));
    benchmark::DoNotOptimize(alg.trace(in));
  }
}
BENCHMARK(BM_Trace)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ClassicalPeriod(benchmark::State& st) {
  AffineSurface s = p2_toric();
  const std::int64_t order = st.range(0);
  for (auto _ : st) {
    ThetaAlgebra alg(s, builtin_diagram(s, order));
    benchmark::DoNotOptimize(classical_period(alg, superpotential(s, order), order));
  }
}
BENCHMARK(BM_ClassicalPeriod)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Smith(benchmark::State& st) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> e(-50, 50);
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = e(rng);
  for (auto _ : st) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_Smith)->RangeMultiplier(2)->Range(2, 16);

void BM_Consistency(benchmark::State& st) {
  AffineSurface s = p2_line_conic();
  const std::int64_t order = st.range(0);
  auto d = builtin_diagram(s, order);
  for (auto _ : st) benchmark::DoNotOptimize(check_consistency(s, d, order));
}
BENCHMARK(BM_Consistency)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
