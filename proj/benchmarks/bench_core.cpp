#include <benchmark/benchmark.h>

#include "hornfree/fluct.hpp"
#include "hornfree/horn.hpp"
#include "hornfree/linalg.hpp"

using namespace hornfree;

static void BM_Eigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(RngState{1, 0});
  const auto x = sample_gue(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(x));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(4, 128);

static void BM_HaarUnitary(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(RngState{2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary(n, rng));
}
BENCHMARK(BM_HaarUnitary)->RangeMultiplier(2)->Range(2, 128);

static void BM_HornTriples(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    clear_horn_cache();
    benchmark::DoNotOptimize(horn_triples(n));
  }
}
BENCHMARK(BM_HornTriples)->DenseRange(2, 6);

static void BM_HornMembership(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = n - i;
    b[i] = 2.0 * (n - i);
  }
  const EigenvalueSequence alpha(a), beta(b);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a[i] + b[i];
  const EigenvalueSequence gamma(g);
  (void)horn_triples(n);
  for (auto _ : state) benchmark::DoNotOptimize(horn_membership(alpha, beta, gamma, 1e-9));
}
BENCHMARK(BM_HornMembership)->DenseRange(2, 6);

static void BM_GuePowerTraces(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(RngState{3, 0});
  for (auto _ : state) {
    const auto x = sample_gue(n, rng);
    benchmark::DoNotOptimize(power_traces(x, 4));
  }
}
BENCHMARK(BM_GuePowerTraces)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK_MAIN();
