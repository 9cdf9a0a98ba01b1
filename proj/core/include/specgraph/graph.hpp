#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specgraph {

/// Unordered node pair, stored with first < second.
using Edge = std::pair<int, int>;

inline Edge make_edge(int i, int j) {
  return i < j ? Edge{i, j} : Edge{j, i};
}

/// Maximal cliques in a perfect ordering with their running-intersection
/// separators. separators[k-1] belongs to cliques[k] (k >= 1); the same
/// separator set may appear more than once and each occurrence counts.
/// An empty separator marks the start of a new connected component.
struct CliqueDecomposition {
  std::vector<std::vector<int>> cliques;
  std::vector<std::vector<int>> separators;
};

/// Decomposability test via maximum-cardinality search followed by a
/// perfect-elimination check. Throws InputError on out-of-range pairs.
bool is_decomposable(int num_nodes, const std::vector<Edge>& edges);

/// Undirected decomposable graph with a cached clique/separator
/// decomposition. Immutable after construction; mutations return new values.
class DecomposableGraph {
 public:
  static DecomposableGraph empty_graph(int num_nodes);
  static DecomposableGraph complete_graph(int num_nodes);

  /// Throws InputError if the graph is not decomposable.
  static DecomposableGraph from_edges(int num_nodes,
                                      const std::vector<Edge>& edges);
  static std::optional<DecomposableGraph> try_from_edges(
      int num_nodes, const std::vector<Edge>& edges);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Sorted lexicographically, each pair with i < j.
  const std::vector<Edge>& edges() const { return edges_; }
  const CliqueDecomposition& decomposition() const { return decomposition_; }

  bool has_edge(int i, int j) const;
  int max_clique_size() const;

  /// Flip edge (i, j) if the result stays decomposable.
  std::optional<DecomposableGraph> try_toggle_edge(int i, int j) const;

  /// Canonical sorted-edge-list digest; equal digests iff equal graphs.
  std::string digest() const;

  bool operator==(const DecomposableGraph& other) const {
    return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
  }

 private:
  DecomposableGraph(int num_nodes, std::vector<Edge> edges,
                    CliqueDecomposition decomposition);

  int num_nodes_;
  std::vector<Edge> edges_;
  CliqueDecomposition decomposition_;
};

/// Decomposable supergraph via min-fill elimination, ties broken by lowest
/// vertex index. Already-decomposable inputs come back unchanged.
DecomposableGraph triangulate(int num_nodes, const std::vector<Edge>& edges);

/// Beta-Binomial prior over the edge count, Beta(a, b) on the inclusion rate.
struct GraphPriorConfig {
  double a = 1.0;
  double b = 1.0;
};

/// log Beta(a+k, b+m-k) - log Beta(a, b) with k = |E|, m = p(p-1)/2.
/// Unnormalized over graphs; depends on the graph only through k.
double log_graph_prior(const DecomposableGraph& graph,
                       const GraphPriorConfig& config);

/// JSON object {"p": int, "edges": [[i,j], ...]}, edges sorted with i < j.
std::string graph_to_json(const DecomposableGraph& graph);
DecomposableGraph graph_from_json(const std::string& text);

std::string graph_to_dot(const DecomposableGraph& graph,
                         const std::vector<std::string>& node_names = {});

}  // namespace specgraph
