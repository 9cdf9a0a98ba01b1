#include "specgraph/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "specgraph/errors.hpp"

namespace specgraph {

namespace {

int pair_count(int num_nodes) { return num_nodes * (num_nodes - 1) / 2; }

std::vector<Edge> all_pairs(int num_nodes) {
  std::vector<Edge> pairs;
  pairs.reserve(pair_count(num_nodes));
  for (int i = 0; i < num_nodes; ++i) {
    for (int j = i + 1; j < num_nodes; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

// Cumulative-weight draw; weights must be positive and finite.
std::size_t weighted_index(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.next_double() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (u < cumulative) return i;
  }
  return weights.size() - 1;
}

bool metropolis_accept(double delta, Rng& rng) {
  return delta >= 0.0 || rng.next_double() < std::exp(delta);
}

}  // namespace

void SearchConfig::validate() const {
  if (iterations < 0) throw ConfigError("search", "negative iteration count");
  if (global_move_period < 1 || resample_period < 1) {
    throw ConfigError("search", "move periods must be >= 1");
  }
  if (!(edge_prob_smoothing > 0.0)) {
    throw ConfigError("search", "edge_prob_smoothing must be positive");
  }
}

void MhConfig::validate() const {
  if (iterations < 0) throw ConfigError("search", "negative iteration count");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
    throw ConfigError("search", "burn_in_fraction must lie in [0, 1)");
  }
}

SearchState::SearchState(ScoredGraph initial)
    : current(initial),
      best(std::move(initial)),
      edge_num(Eigen::MatrixXd::Zero(current.graph.num_nodes(),
                                     current.graph.num_nodes())),
      running_max(current.log_posterior) {}

double edge_probability(const SearchState& state, double smoothing, int i,
                        int j) {
  const double m = pair_count(state.current.graph.num_nodes());
  return (state.edge_num(i, j) + smoothing / m) /
         (state.edge_den + smoothing);
}

Eigen::MatrixXd edge_probability_matrix(const SearchState& state,
                                        double smoothing) {
  const int p = state.current.graph.num_nodes();
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      probs(i, j) = probs(j, i) = edge_probability(state, smoothing, i, j);
    }
  }
  return probs;
}

void record_visit(SearchState& state, const ScoredGraph& scored) {
  state.ledger.emplace(scored.graph.digest(), scored);
  if (scored.log_posterior > state.best.log_posterior) state.best = scored;
}

void update_accumulators(SearchState& state) {
  const double lp = state.current.log_posterior;
  if (lp > state.running_max) {
    const double rescale = std::exp(state.running_max - lp);
    state.edge_num *= rescale;
    state.edge_den *= rescale;
    state.running_max = lp;
  }
  const double w = std::exp(lp - state.running_max);
  for (const auto& [i, j] : state.current.graph.edges()) {
    state.edge_num(i, j) += w;
    state.edge_num(j, i) += w;
  }
  state.edge_den += w;
}

bool local_move(SearchState& state, const ScoreEngine& engine,
                const SearchConfig& config, Rng& rng) {
  const DecomposableGraph& graph = state.current.graph;
  const int p = graph.num_nodes();

  struct Candidate {
    DecomposableGraph graph;
    double weight;
  };
  std::vector<Candidate> additions;
  std::vector<Candidate> deletions;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      auto toggled = graph.try_toggle_edge(i, j);
      if (!toggled) continue;
      if (toggled->max_clique_size() > engine.max_scorable_clique()) continue;
      const double q = edge_probability(state, config.edge_prob_smoothing, i, j);
      if (graph.has_edge(i, j)) {
        deletions.push_back({std::move(*toggled), 1.0 / q});
      } else {
        additions.push_back({std::move(*toggled), q});
      }
    }
  }

  const bool prefer_add = rng.next_double() < 0.5;
  auto* pool = prefer_add ? &additions : &deletions;
  if (pool->empty()) pool = prefer_add ? &deletions : &additions;
  if (pool->empty()) return false;

  std::vector<double> weights;
  weights.reserve(pool->size());
  for (const auto& candidate : *pool) weights.push_back(candidate.weight);
  const Candidate& chosen = (*pool)[weighted_index(weights, rng)];

  ScoredGraph scored = engine.score(chosen.graph);
  record_visit(state, scored);
  const double delta = scored.log_posterior - state.current.log_posterior;
  if (!metropolis_accept(delta, rng)) return false;
  state.current = std::move(scored);
  return true;
}

bool global_move(SearchState& state, const ScoreEngine& engine,
                 const SearchConfig& config, Rng& rng) {
  const int p = state.current.graph.num_nodes();
  std::vector<Edge> proposal_edges;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const double q = edge_probability(state, config.edge_prob_smoothing, i, j);
      if (rng.next_double() < q) proposal_edges.emplace_back(i, j);
    }
  }
  DecomposableGraph proposal = triangulate(p, proposal_edges);
  if (proposal.max_clique_size() > engine.max_scorable_clique()) return false;

  ScoredGraph scored = engine.score(proposal);
  record_visit(state, scored);
  const double delta = scored.log_posterior - state.current.log_posterior;
  if (!metropolis_accept(delta, rng)) return false;
  state.current = std::move(scored);
  return true;
}

bool resample_move(SearchState& state, Rng& rng) {
  if (state.ledger.empty()) return false;
  double max_lp = -std::numeric_limits<double>::infinity();
  for (const auto& [digest, scored] : state.ledger) {
    max_lp = std::max(max_lp, scored.log_posterior);
  }
  std::vector<const ScoredGraph*> items;
  std::vector<double> weights;
  items.reserve(state.ledger.size());
  weights.reserve(state.ledger.size());
  for (const auto& [digest, scored] : state.ledger) {
    items.push_back(&scored);
    weights.push_back(std::exp(scored.log_posterior - max_lp));
  }
  state.current = *items[weighted_index(weights, rng)];
  return true;
}

SearchResult fincs_run(const SpectralStatistics& stats,
                       const SearchConfig& config) {
  config.validate();
  const ScoreEngine engine(stats, config.scoring, config.prior);
  Rng rng(config.seed);

  SearchState state(engine.score(DecomposableGraph::empty_graph(stats.dim)));
  record_visit(state, state.current);

  SearchResult result{state.best, Eigen::MatrixXd(), {}};
  result.trace.reserve(static_cast<std::size_t>(config.iterations));
  for (int t = 1; t <= config.iterations; ++t) {
    const char* move = "local";
    bool accepted = false;
    if (t % config.resample_period == 0) {
      move = "resample";
      accepted = resample_move(state, rng);
    } else if (t % config.global_move_period == 0) {
      move = "global";
      accepted = global_move(state, engine, config, rng);
    } else {
      accepted = local_move(state, engine, config, rng);
    }
    update_accumulators(state);
    result.trace.push_back(
        TraceRecord{t, move, accepted, state.current.log_posterior});
  }

  result.map_graph = state.best;
  result.edge_probabilities =
      edge_probability_matrix(state, config.edge_prob_smoothing);
  return result;
}

MhResult mh_sampler(const SpectralStatistics& stats, const MhConfig& config) {
  config.validate();
  const int p = stats.dim;
  MhResult result;
  result.edge_frequencies = Eigen::MatrixXd::Zero(p, p);
  if (config.iterations == 0) return result;

  const ScoreEngine engine(stats, config.scoring, config.prior);
  Rng rng(config.seed);
  const std::vector<Edge> pairs = all_pairs(p);

  ScoredGraph current = engine.score(DecomposableGraph::empty_graph(p));
  result.visited_log_posteriors.emplace(current.graph.digest(),
                                        current.log_posterior);

  const long burn_in =
      static_cast<long>(config.burn_in_fraction *
                        static_cast<double>(config.iterations));
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(p, p);
  for (long t = 1; t <= config.iterations; ++t) {
    if (!pairs.empty()) {
      const auto [i, j] = pairs[rng.next_index(pairs.size())];
      auto toggled = current.graph.try_toggle_edge(i, j);
      if (toggled &&
          toggled->max_clique_size() <= engine.max_scorable_clique()) {
        ScoredGraph candidate = engine.score(*toggled);
        result.visited_log_posteriors.emplace(candidate.graph.digest(),
                                              candidate.log_posterior);
        const double delta =
            candidate.log_posterior - current.log_posterior;
        if (metropolis_accept(delta, rng)) {
          current = std::move(candidate);
          ++result.num_accepted;
        }
      }
    }
    if (t > burn_in) {
      for (const auto& [i, j] : current.graph.edges()) {
        counts(i, j) += 1.0;
        counts(j, i) += 1.0;
      }
      ++result.num_samples;
    }
  }
  if (result.num_samples > 0) {
    result.edge_frequencies =
        counts / static_cast<double>(result.num_samples);
  }
  return result;
}

}  // namespace specgraph
