#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specgraph/graph.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

/// VAR(1) benchmark model x(t) = A x(t-1) + eps(t) with unit noise
/// covariance. A is upper triangular, so its eigenvalues are its diagonal
/// and stationarity reduces to |A_ii| < 1.
struct VarModel {
  Eigen::MatrixXd A;
  std::vector<Edge> true_graph_edges;
};

struct SimConfig {
  int p = 2;
  int T = 100;
  int N = 1;
  double rho = 0.2;           // Bernoulli rate for upper off-diagonal entries
  double diag_value = 0.5;
  double offdiag_value = 0.5;
  std::uint64_t seed = 0;
  bool require_decomposable = true;

  void validate() const;
};

/// Conditional-independence graph of the VAR(1) process, read off the
/// sparsity pattern of the inverse spectral density
///   S(lambda)^{-1} = I + A'A + e^{-i lambda} A + e^{i lambda} A'.
/// Edge (i,j) present iff (A'A)_ij, A_ij, or A_ji is structurally nonzero;
/// the three terms multiply linearly independent functions of lambda, so no
/// exact cancellation between them is possible and no numeric threshold is
/// needed.
std::vector<Edge> var1_true_graph(const Eigen::MatrixXd& A);

/// Rejection-samples a model: diagonal fixed at diag_value, each upper
/// off-diagonal entry offdiag_value * Bernoulli(rho), redrawn until the
/// derived true graph is decomposable (when required). Throws
/// NumericalError once the attempt budget is exhausted.
VarModel sample_var_model(const SimConfig& config, Rng& rng,
                          int max_attempts = 10000);

/// N independent replicates of length T each, started from x(0) = 0 with
/// `burn_in` initial samples discarded.
TimeSeriesPanel generate_panel(const VarModel& model, int T, int N,
                               int burn_in, Rng& rng);

struct RecoveryMetrics {
  double tpr = 0.0;  // 1.0 when the true graph is empty
  double fpr = 0.0;  // 0.0 when the true graph is complete
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;
};

RecoveryMetrics recovery_metrics(const std::vector<Edge>& estimated,
                                 const std::vector<Edge>& truth, int p);

/// {"A": [[...]], "true_edges": [[i,j],...], "seed": ...}
std::string model_to_json(const VarModel& model, std::uint64_t seed);
VarModel model_from_json(const std::string& text,
                         std::uint64_t* seed_out = nullptr);

}  // namespace specgraph
