#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "specgraph/likelihood.hpp"

namespace {

void BM_MonolithicScore(benchmark::State& state) {
  const int entries = static_cast<int>(state.range(0));
  const auto stats = bench::random_stats(10, entries, 40.0, 29);
  const auto graph = bench::random_decomposable(10, 60, 31);
  const auto prior = specgraph::HiwPrior::fractional(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        specgraph::log_marginal_likelihood(stats, graph, prior));
  }
}
BENCHMARK(BM_MonolithicScore)->Arg(32)->Arg(128);

void BM_EngineColdScore(benchmark::State& state) {
  const int entries = static_cast<int>(state.range(0));
  const auto stats = bench::random_stats(10, entries, 40.0, 37);
  const auto graph = bench::random_decomposable(10, 60, 41);
  for (auto _ : state) {
    specgraph::ScoreEngine engine(stats, specgraph::HiwPrior::fractional(0.1),
                                  {});
    benchmark::DoNotOptimize(engine.score(graph));
  }
}
BENCHMARK(BM_EngineColdScore)->Arg(32)->Arg(128);

void BM_EngineWarmRescore(benchmark::State& state) {
  const auto stats = bench::random_stats(10, 128, 40.0, 43);
  const auto graph = bench::random_decomposable(10, 60, 47);
  specgraph::ScoreEngine engine(stats, specgraph::HiwPrior::fractional(0.1),
                                {});
  engine.score(graph);  // warm the subset cache
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.score(graph));
  }
}
BENCHMARK(BM_EngineWarmRescore);

}  // namespace
