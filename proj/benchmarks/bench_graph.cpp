#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "specgraph/graph.hpp"

namespace {

void BM_FromEdges(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto graph = bench::random_decomposable(p, 6 * p, 7);
  const auto edges = graph.edges();
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::DecomposableGraph::from_edges(p, edges));
  }
}
BENCHMARK(BM_FromEdges)->Arg(10)->Arg(25)->Arg(50);

void BM_ToggleEdge(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto graph = bench::random_decomposable(p, 6 * p, 11);
  int i = 0;
  for (auto _ : state) {
    const int a = i % p;
    const int b = (i * 7 + 1) % p;
    ++i;
    if (a == b) continue;
    benchmark::DoNotOptimize(graph.try_toggle_edge(a, b));
  }
}
BENCHMARK(BM_ToggleEdge)->Arg(10)->Arg(25)->Arg(50);

void BM_Triangulate(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  specgraph::Rng rng(13);
  std::vector<specgraph::Edge> edges;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (rng.next_bernoulli(0.2)) edges.emplace_back(i, j);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(specgraph::triangulate(p, edges));
  }
}
BENCHMARK(BM_Triangulate)->Arg(10)->Arg(25);

}  // namespace
