#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "specgraph/spectral.hpp"

namespace {

specgraph::TimeSeriesPanel random_panel(int T, int p, int N,
                                        std::uint64_t seed) {
  specgraph::Rng rng(seed);
  specgraph::TimeSeriesPanel panel;
  for (int n = 0; n < N; ++n) {
    Eigen::MatrixXd series(T, p);
    for (int t = 0; t < T; ++t) {
      for (int c = 0; c < p; ++c) series(t, c) = rng.next_normal();
    }
    panel.replicates.push_back(std::move(series));
  }
  return specgraph::mean_center(std::move(panel));
}

void BM_AggregatePeriodogram(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const auto panel = random_panel(T, 8, 4, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::aggregate_periodogram(panel));
  }
}
BENCHMARK(BM_AggregatePeriodogram)->Arg(512)->Arg(2048)->Arg(8192);

void BM_DaniellSmooth(benchmark::State& state) {
  const auto panel = random_panel(2048, 8, 1, 19);
  const auto stats = specgraph::aggregate_periodogram(panel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::daniell_smooth(stats, 16));
  }
}
BENCHMARK(BM_DaniellSmooth);

void BM_FoldConjugatePairs(benchmark::State& state) {
  const auto panel = random_panel(4096, 8, 1, 23);
  const auto stats = specgraph::aggregate_periodogram(panel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::fold_conjugate_pairs(stats));
  }
}
BENCHMARK(BM_FoldConjugatePairs);

}  // namespace
