#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specgraph/graph.hpp"
#include "specgraph/likelihood.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

struct SearchConfig {
  int iterations = 0;
  int global_move_period = 50;
  int resample_period = 100;
  /// Pseudo-count mass added to the edge-probability estimate so that
  /// never-visited edges keep a nonzero proposal weight.
  double edge_prob_smoothing = 1.0;
  std::uint64_t seed = 0;
  GraphPriorConfig prior{};
  HiwPrior scoring{};

  void validate() const;
};

/// Search bookkeeping. edge_num/edge_den accumulate posterior-weighted edge
/// indicators with the weights kept relative to a running maximum, so the
/// stored values never overflow: w_t = exp(log_posterior_t - running_max).
struct SearchState {
  explicit SearchState(ScoredGraph initial);

  ScoredGraph current;
  ScoredGraph best;
  Eigen::MatrixXd edge_num;  // symmetric, zero diagonal
  double edge_den = 0.0;
  double running_max;
  std::map<std::string, ScoredGraph> ledger;  // digest -> visited model
};

struct TraceRecord {
  int iteration = 0;
  std::string move;
  bool accepted = false;
  double log_posterior = 0.0;
};

struct SearchResult {
  ScoredGraph map_graph;
  Eigen::MatrixXd edge_probabilities;  // symmetric, zero diagonal, (0,1)
  std::vector<TraceRecord> trace;
};

/// Smoothed edge-inclusion estimate
///   (edge_num_ij + eps/m) / (edge_den + eps),  m = p(p-1)/2,
/// always strictly inside (0, 1).
double edge_probability(const SearchState& state, double smoothing, int i,
                        int j);
Eigen::MatrixXd edge_probability_matrix(const SearchState& state,
                                        double smoothing);

/// Records a scored graph in the ledger and refreshes the incumbent best.
void record_visit(SearchState& state, const ScoredGraph& scored);

/// Adds the current graph's edge indicators with weight
/// exp(log_posterior - running_max), rescaling past mass when a new
/// maximum arrives.
void update_accumulators(SearchState& state);

/// Single edge toggle: pick add/delete with probability 1/2, draw a
/// decomposability-preserving candidate with weight q-hat (additions) or
/// 1/q-hat (deletions), Metropolis-accept on the posterior ratio. Falls back
/// to the other direction when one has no legal candidate. Returns whether
/// the proposal was accepted.
bool local_move(SearchState& state, const ScoreEngine& engine,
                const SearchConfig& config, Rng& rng);

/// Independent Bernoulli(q-hat) edge draws, triangulated into a decomposable
/// proposal, Metropolis-accepted on the posterior ratio.
bool global_move(SearchState& state, const ScoreEngine& engine,
                 const SearchConfig& config, Rng& rng);

/// Unconditional jump to a ledger entry drawn with probability proportional
/// to exp(log_posterior - ledger max). Empty ledger is a no-op.
bool resample_move(SearchState& state, Rng& rng);

/// Stochastic search from the empty graph. Step t (1-based) is a resampling
/// move when t % resample_period == 0, otherwise a global move when
/// t % global_move_period == 0, otherwise a local move. Deterministic in
/// (stats, config) including the seed.
SearchResult fincs_run(const SpectralStatistics& stats,
                       const SearchConfig& config);

struct MhConfig {
  long iterations = 0;
  std::uint64_t seed = 0;
  double burn_in_fraction = 0.2;
  GraphPriorConfig prior{};
  HiwPrior scoring{};

  void validate() const;
};

struct MhResult {
  /// Post-burn-in Monte Carlo edge-inclusion frequencies.
  Eigen::MatrixXd edge_frequencies;
  long num_samples = 0;
  long num_accepted = 0;
  std::map<std::string, double> visited_log_posteriors;
};

/// Metropolis-Hastings over decomposable graphs: uniform proposal over all
/// p(p-1)/2 pairs, auto-reject when the toggle breaks decomposability. The
/// auto-reject makes the proposal symmetric between adjacent decomposable
/// graphs, so the acceptance ratio needs no Hastings correction.
MhResult mh_sampler(const SpectralStatistics& stats, const MhConfig& config);

}  // namespace specgraph
