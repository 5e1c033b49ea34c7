// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "pgfclt/brownian_sim.hpp"
#include "pgfclt/dist_core.hpp"
#include "pgfclt/harmonic_verify.hpp"

using namespace pgfclt;

namespace {

// Binomial(n, 1/2) from log-factorials, so setup does not dominate at large n.
DiscretePMF bernoulli_power(long n) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k)
    w[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
  return DiscretePMF::from_weights(w);
}

Exec exec_of(const benchmark::State& s) { return s.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_convolve(benchmark::State& state) {
  const auto p = bernoulli_power(state.range(0));
  const auto q = bernoulli_power(state.range(0) / 2 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(p, q, exec_of(state)));
  state.SetComplexityN(state.range(0));
}

void BM_kolmogorov(benchmark::State& state) {
  const auto p = bernoulli_power(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kolmogorov_distance(p, exec_of(state)));
}

void BM_exit_rectangle(benchmark::State& state) {
  WosConfig cfg;
  cfg.seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_exit_rectangle({4.0, 1.0}, 0.0, state.range(0), cfg, exec_of(state)));
}

void BM_b_decreasing(benchmark::State& state) {
  const auto f = PGFPoly(bernoulli_power(state.range(0)));
  const GridSpec g{64, 256, SectorSpec{-kPi / 2, kPi / 2, 2.0}};
  for (auto _ : state) benchmark::DoNotOptimize(b_decreasing_check(f, 0.0, g, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_convolve)->ArgsProduct({{1 << 10, 1 << 12, 1 << 14}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_kolmogorov)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_exit_rectangle)->ArgsProduct({{10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_b_decreasing)->ArgsProduct({{64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
