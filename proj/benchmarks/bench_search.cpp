#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "specgraph/search.hpp"

namespace {

void BM_FincsIterations(benchmark::State& state) {
  const auto stats = bench::random_stats(10, 64, 40.0, 53);
  specgraph::SearchConfig config;
  config.iterations = static_cast<int>(state.range(0));
  config.seed = 59;
  config.scoring = specgraph::HiwPrior::fractional(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::fincs_run(stats, config));
  }
}
BENCHMARK(BM_FincsIterations)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MhIterations(benchmark::State& state) {
  const auto stats = bench::random_stats(6, 64, 40.0, 61);
  specgraph::MhConfig config;
  config.iterations = static_cast<long>(state.range(0));
  config.seed = 67;
  config.scoring = specgraph::HiwPrior::fractional(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::mh_sampler(stats, config));
  }
}
BENCHMARK(BM_MhIterations)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
