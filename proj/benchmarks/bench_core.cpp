#include <benchmark/benchmark.h>

#include "ergolab/ergodic.hpp"
#include "ergolab/examples.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/spectral.hpp"

using namespace ergolab;

static void BM_LargestSingularValue(benchmark::State& state) {
  const auto t = random_operator(state.range(0), 0.9, 1);
  for (auto _ : state) benchmark::DoNotOptimize(largest_singular_value(t.matrix));
}
BENCHMARK(BM_LargestSingularValue)->Arg(8)->Arg(64)->Arg(256);

static void BM_ApplyMeanCesaro(benchmark::State& state) {
  const auto t = random_operator(6, 1.0, 2);
  const auto s = MeanScheme::cesaro(2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_mean(s, t, state.range(0)));
}
BENCHMARK(BM_ApplyMeanCesaro)->Arg(64)->Arg(512);

static void BM_MeanSweepAbel(benchmark::State& state) {
  const auto t = random_operator(6, 1.0, 3);
  for (auto _ : state) {
    MeanSweep sweep(MeanScheme::abel(), t);
    while (sweep.n() < state.range(0)) sweep.advance();
    benchmark::DoNotOptimize(sweep.value());
  }
}
BENCHMARK(BM_MeanSweepAbel)->Arg(64);

static void BM_KreissJordan(benchmark::State& state) {
  const auto t = jordan_block(2, 1.0);
  const auto grid = AnnulusGrid::dyadic(static_cast<int>(state.range(0)), 128);
  for (auto _ : state) benchmark::DoNotOptimize(kreiss_functional(t, 0, grid).value);
}
BENCHMARK(BM_KreissJordan)->Arg(6)->Arg(10);

static void BM_VolterraPowers(benchmark::State& state) {
  const auto t = identity_minus_volterra(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(power_norm_sequence(t, 256, NormKind::MaxColumnSum));
}
BENCHMARK(BM_VolterraPowers)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_H1MeanNorm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(h1_mean_norm(32, state.range(0)));
}
BENCHMARK(BM_H1MeanNorm)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
