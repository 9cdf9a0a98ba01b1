#pragma once

#include <vector>

#include <Eigen/Dense>

#include "specgraph/graph.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"

namespace bench {

/// Hermitian positive definite stat of full rank: G G^H + dof * I.
inline Eigen::MatrixXcd random_psd(int p, double dof, specgraph::Rng& rng) {
  Eigen::MatrixXcd g(p, p);
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      g(r, c) = std::complex<double>(rng.next_normal(), rng.next_normal());
    }
  }
  return g * g.adjoint() + dof * Eigen::MatrixXcd::Identity(p, p);
}

inline specgraph::SpectralStatistics random_stats(int p, int entries,
                                                  double dof,
                                                  std::uint64_t seed) {
  specgraph::Rng rng(seed);
  specgraph::SpectralStatistics stats;
  stats.series_length = entries + 1;
  stats.num_replicates = static_cast<int>(dof);
  stats.dim = p;
  stats.excluded_frequencies = {0};
  for (int k = 1; k <= entries; ++k) {
    specgraph::SpectralEntry entry;
    entry.freq_lo = entry.freq_hi = k;
    entry.dof = dof;
    entry.stat = random_psd(p, dof, rng);
    stats.entries.push_back(std::move(entry));
  }
  return stats;
}

/// Random decomposable graph grown by random decomposability-preserving
/// toggles from the empty graph.
inline specgraph::DecomposableGraph random_decomposable(int p, int steps,
                                                        std::uint64_t seed) {
  specgraph::Rng rng(seed);
  specgraph::DecomposableGraph graph = specgraph::DecomposableGraph::empty_graph(p);
  for (int s = 0; s < steps; ++s) {
    const int i = static_cast<int>(rng.next_index(static_cast<std::size_t>(p)));
    const int j = static_cast<int>(rng.next_index(static_cast<std::size_t>(p)));
    if (i == j) continue;
    if (auto toggled = graph.try_toggle_edge(i, j)) graph = std::move(*toggled);
  }
  return graph;
}

}  // namespace bench
