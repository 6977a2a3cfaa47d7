#include <benchmark/benchmark.h>

#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/distribution.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/skew.hpp"

using namespace skewlab;

static void BM_Philox(benchmark::State& state) {
  Counter4 c{0, 0, 0, 0};
  const Key2 k{0x12345678u, 0x9abcdef0u};
  for (auto _ : state) {
    c[0]++;
    benchmark::DoNotOptimize(philox4x32(c, k));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

static void BM_SamplerPartialSums(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto sys = skew::SkewSystem::theorem2(circle::RotationNumber::golden_mean(), circle::RoofFunction::cosine(1.0));
  const dist::SignSumSampler sampler(dist::orbit_weights(sys, 0.3, n));
  const std::vector<std::size_t> horizons{n};
  constexpr std::uint64_t samples = 4096;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.partial_sums(horizons, samples, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_SamplerPartialSums)->Arg(1 << 10)->Arg(1 << 14);

static void BM_MeetInMiddle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(5);
  std::vector<double> c(n);
  for (auto& v : c) v = 0.5 + rng.uniform();
  const dist::WeightedSignSum w(c);
  for (auto _ : state) benchmark::DoNotOptimize(dist::meet_in_middle_prob(w, {-1.0, 1.0, 0.0}));
}
BENCHMARK(BM_MeetInMiddle)->Arg(20)->Arg(32);

static void BM_LatticeDp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dist::WeightedSignSum w(std::vector<double>(n, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(dist::exact_prob(w, {-1.0, 1.0, 0.0}));
}
BENCHMARK(BM_LatticeDp)->Arg(1 << 12)->Arg(1 << 14);

BENCHMARK_MAIN();
