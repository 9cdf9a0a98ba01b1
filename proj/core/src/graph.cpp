#include "specgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specgraph/errors.hpp"

namespace specgraph {

namespace {

using AdjacencyMatrix = std::vector<char>;  // row-major p*p, symmetric

AdjacencyMatrix build_adjacency(int p, const std::vector<Edge>& edges) {
  AdjacencyMatrix adj(static_cast<std::size_t>(p) * p, 0);
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= p || j >= p) {
      throw InputError("graphs", "edge (" + std::to_string(i) + "," +
                                     std::to_string(j) +
                                     ") out of range for p=" +
                                     std::to_string(p));
    }
    if (i == j) {
      throw InputError("graphs", "self-loop at node " + std::to_string(i));
    }
    adj[static_cast<std::size_t>(i) * p + j] = 1;
    adj[static_cast<std::size_t>(j) * p + i] = 1;
  }
  return adj;
}

std::vector<Edge> normalize_edges(const std::vector<Edge>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [i, j] : edges) out.push_back(make_edge(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct McsResult {
  bool chordal = false;
  std::vector<int> order;                       // selection order
  std::vector<std::vector<int>> prior_neighbors;  // per selected vertex, sorted
};

// Maximum-cardinality search; ties broken by lowest vertex index so runs are
// reproducible. The graph is chordal iff every vertex's already-numbered
// neighbor set is complete (reverse selection order is then a perfect
// elimination ordering).
McsResult run_mcs(int p, const AdjacencyMatrix& adj) {
  McsResult result;
  result.order.reserve(p);
  result.prior_neighbors.reserve(p);

  std::vector<int> weight(p, 0);
  std::vector<char> numbered(p, 0);
  for (int step = 0; step < p; ++step) {
    int pick = -1;
    for (int v = 0; v < p; ++v) {
      if (!numbered[v] && (pick == -1 || weight[v] > weight[pick])) pick = v;
    }
    numbered[pick] = 1;
    std::vector<int> prior;
    prior.reserve(weight[pick]);
    for (int u = 0; u < p; ++u) {
      if (adj[static_cast<std::size_t>(pick) * p + u]) {
        if (numbered[u] && u != pick) prior.push_back(u);
        if (!numbered[u]) ++weight[u];
      }
    }
    result.order.push_back(pick);
    result.prior_neighbors.push_back(std::move(prior));
  }

  result.chordal = true;
  for (const auto& prior : result.prior_neighbors) {
    for (std::size_t a = 0; a + 1 < prior.size() && result.chordal; ++a) {
      for (std::size_t b = a + 1; b < prior.size(); ++b) {
        if (!adj[static_cast<std::size_t>(prior[a]) * p + prior[b]]) {
          result.chordal = false;
          break;
        }
      }
    }
  }
  return result;
}

// Maximal cliques in MCS discovery order (Blair & Peyton): vertex v_i starts a
// new clique when its prior-neighbor count does not grow the previous one.
CliqueDecomposition decomposition_from_mcs(const McsResult& mcs) {
  CliqueDecomposition decomp;
  const int p = static_cast<int>(mcs.order.size());
  std::vector<char> seen;  // prefix union of cliques emitted so far

  auto emit_clique = [&](int i) {
    std::vector<int> clique = mcs.prior_neighbors[i];
    clique.push_back(mcs.order[i]);
    std::sort(clique.begin(), clique.end());
    if (!decomp.cliques.empty()) {
      std::vector<int> separator;
      for (int v : clique) {
        if (seen[v]) separator.push_back(v);
      }
      decomp.separators.push_back(std::move(separator));
    }
    for (int v : clique) seen[v] = 1;
    decomp.cliques.push_back(std::move(clique));
  };

  if (p == 0) return decomp;
  seen.assign(p, 0);
  for (int i = 0; i + 1 < p; ++i) {
    const auto next_size = mcs.prior_neighbors[i + 1].size();
    if (next_size <= mcs.prior_neighbors[i].size()) emit_clique(i);
  }
  emit_clique(p - 1);
  return decomp;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

bool is_decomposable(int num_nodes, const std::vector<Edge>& edges) {
  if (num_nodes < 0) throw InputError("graphs", "negative node count");
  const auto adj = build_adjacency(num_nodes, edges);
  return run_mcs(num_nodes, adj).chordal;
}

DecomposableGraph::DecomposableGraph(int num_nodes, std::vector<Edge> edges,
                                     CliqueDecomposition decomposition)
    : num_nodes_(num_nodes),
      edges_(std::move(edges)),
      decomposition_(std::move(decomposition)) {}

DecomposableGraph DecomposableGraph::empty_graph(int num_nodes) {
  return from_edges(num_nodes, {});
}

DecomposableGraph DecomposableGraph::complete_graph(int num_nodes) {
  std::vector<Edge> edges;
  for (int i = 0; i < num_nodes; ++i)
    for (int j = i + 1; j < num_nodes; ++j) edges.emplace_back(i, j);
  return from_edges(num_nodes, edges);
}

DecomposableGraph DecomposableGraph::from_edges(int num_nodes,
                                                const std::vector<Edge>& edges) {
  auto graph = try_from_edges(num_nodes, edges);
  if (!graph) {
    throw InputError("graphs", "edge set on " + std::to_string(num_nodes) +
                                   " nodes is not decomposable");
  }
  return *std::move(graph);
}

std::optional<DecomposableGraph> DecomposableGraph::try_from_edges(
    int num_nodes, const std::vector<Edge>& edges) {
  if (num_nodes < 0) throw InputError("graphs", "negative node count");
  auto normalized = normalize_edges(edges);
  const auto adj = build_adjacency(num_nodes, normalized);
  const auto mcs = run_mcs(num_nodes, adj);
  if (!mcs.chordal) return std::nullopt;
  return DecomposableGraph(num_nodes, std::move(normalized),
                           decomposition_from_mcs(mcs));
}

bool DecomposableGraph::has_edge(int i, int j) const {
  return std::binary_search(edges_.begin(), edges_.end(), make_edge(i, j));
}

int DecomposableGraph::max_clique_size() const {
  std::size_t best = 0;
  for (const auto& clique : decomposition_.cliques)
    best = std::max(best, clique.size());
  return static_cast<int>(best);
}

std::optional<DecomposableGraph> DecomposableGraph::try_toggle_edge(
    int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= num_nodes_ || j >= num_nodes_) {
    throw InputError("graphs", "invalid edge (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")");
  }
  std::vector<Edge> candidate = edges_;
  const Edge edge = make_edge(i, j);
  const auto pos = std::lower_bound(candidate.begin(), candidate.end(), edge);
  if (pos != candidate.end() && *pos == edge) {
    candidate.erase(pos);
  } else {
    candidate.insert(pos, edge);
  }
  return try_from_edges(num_nodes_, candidate);
}

std::string DecomposableGraph::digest() const {
  std::ostringstream out;
  out << num_nodes_ << '|';
  for (const auto& [i, j] : edges_) out << i << '-' << j << ';';
  return out.str();
}

DecomposableGraph triangulate(int num_nodes, const std::vector<Edge>& edges) {
  auto working = normalize_edges(edges);
  auto adj = build_adjacency(num_nodes, working);
  std::set<Edge> all_edges(working.begin(), working.end());

  std::vector<char> remaining(num_nodes, 1);
  auto fill_count = [&](int v) {
    std::vector<int> nbrs;
    for (int u = 0; u < num_nodes; ++u) {
      if (remaining[u] && u != v && adj[static_cast<std::size_t>(v) * num_nodes + u])
        nbrs.push_back(u);
    }
    int fill = 0;
    for (std::size_t a = 0; a + 1 < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        if (!adj[static_cast<std::size_t>(nbrs[a]) * num_nodes + nbrs[b]]) ++fill;
    return std::pair{fill, nbrs};
  };

  for (int step = 0; step < num_nodes; ++step) {
    int pick = -1;
    int best_fill = 0;
    std::vector<int> pick_nbrs;
    for (int v = 0; v < num_nodes; ++v) {
      if (!remaining[v]) continue;
      auto [fill, nbrs] = fill_count(v);
      if (pick == -1 || fill < best_fill) {
        pick = v;
        best_fill = fill;
        pick_nbrs = std::move(nbrs);
      }
    }
    for (std::size_t a = 0; a + 1 < pick_nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < pick_nbrs.size(); ++b) {
        const int u = pick_nbrs[a];
        const int w = pick_nbrs[b];
        if (!adj[static_cast<std::size_t>(u) * num_nodes + w]) {
          adj[static_cast<std::size_t>(u) * num_nodes + w] = 1;
          adj[static_cast<std::size_t>(w) * num_nodes + u] = 1;
          all_edges.insert(make_edge(u, w));
        }
      }
    }
    remaining[pick] = 0;
  }

  return DecomposableGraph::from_edges(
      num_nodes, std::vector<Edge>(all_edges.begin(), all_edges.end()));
}

double log_graph_prior(const DecomposableGraph& graph,
                       const GraphPriorConfig& config) {
  if (config.a <= 0.0 || config.b <= 0.0) {
    throw ConfigError("graphs", "graph prior shapes must be positive");
  }
  const double m = graph.num_nodes() * (graph.num_nodes() - 1) / 2.0;
  const double k = graph.num_edges();
  return log_beta(config.a + k, config.b + m - k) -
         log_beta(config.a, config.b);
}

std::string graph_to_json(const DecomposableGraph& graph) {
  nlohmann::json j;
  j["p"] = graph.num_nodes();
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges()) j["edges"].push_back({a, b});
  return j.dump();
}

DecomposableGraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("graphs", std::string("bad graph JSON: ") + e.what());
  }
  if (!j.contains("p") || !j.contains("edges")) {
    throw InputError("graphs", "graph JSON must contain \"p\" and \"edges\"");
  }
  std::vector<Edge> edges;
  for (const auto& pair : j["edges"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw InputError("graphs", "graph JSON edges must be [i,j] pairs");
    }
    edges.push_back(make_edge(pair[0].get<int>(), pair[1].get<int>()));
  }
  return DecomposableGraph::from_edges(j["p"].get<int>(), edges);
}

std::string graph_to_dot(const DecomposableGraph& graph,
                         const std::vector<std::string>& node_names) {
  auto name = [&](int v) {
    if (v < static_cast<int>(node_names.size())) return node_names[v];
    return "n" + std::to_string(v);
  };
  std::ostringstream out;
  out << "graph G {\n";
  for (int v = 0; v < graph.num_nodes(); ++v)
    out << "  \"" << name(v) << "\";\n";
  for (const auto& [i, j] : graph.edges())
    out << "  \"" << name(i) << "\" -- \"" << name(j) << "\";\n";
  out << "}\n";
  return out.str();
}

}  // namespace specgraph
