#include <benchmark/benchmark.h>

#include "mixq/analytic.hpp"
#include "mixq/order_stats.hpp"
#include "mixq/rng.hpp"
#include "mixq/sim.hpp"

namespace {

void BM_batch_mix_sim(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  mixq::SimParams p;
  p.kind = mixq::MixKind::batch;
  p.n = n;
  p.k = 2;
  p.rate = 1.0;
  p.horizon.max_messages = 100'000;
  p.seed = 42;
  for (auto _ : state) benchmark::DoNotOptimize(mixq::run(p));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_batch_mix_sim)->Arg(10)->Arg(40)->Arg(100);

void BM_sampling_mix_sim(benchmark::State& state) {
  mixq::SimParams p;
  p.kind = mixq::MixKind::sampling;
  p.n = static_cast<int>(state.range(0));
  p.k = 3;
  p.rate = 1.0;
  p.p_a = 0.5;
  p.horizon.max_messages = 100'000;
  p.seed = 42;
  for (auto _ : state) benchmark::DoNotOptimize(mixq::run(p));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_sampling_mix_sim)->Arg(10)->Arg(100);

void BM_order_stat_sample(benchmark::State& state) {
  const mixq::ExpOrderStat os(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(0)) / 2, 1.0);
  mixq::RngStream rng(7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(os.sample(rng));
}
BENCHMARK(BM_order_stat_sample)->Arg(10)->Arg(100)->Arg(1000);

void BM_efs_fixed_point(benchmark::State& state) {
  const mixq::BatchMixParams params{40, static_cast<int>(state.range(0)), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(mixq::efs_fixed_point(params));
}
BENCHMARK(BM_efs_fixed_point)->Arg(2)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
