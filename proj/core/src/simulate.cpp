#include "specgraph/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "specgraph/errors.hpp"

namespace specgraph {

void SimConfig::validate() const {
  if (p < 1 || T < 1 || N < 1) {
    throw ConfigError("simulate", "p, T, and N must be positive");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw ConfigError("simulate", "rho must lie in [0, 1]");
  }
  if (!(std::abs(diag_value) < 1.0)) {
    throw ConfigError("simulate",
                      "|diag_value| must be < 1 for stationarity");
  }
}

std::vector<Edge> var1_true_graph(const Eigen::MatrixXd& A) {
  const int p = static_cast<int>(A.rows());
  if (A.cols() != p) throw InputError("simulate", "A must be square");
  if (!A.allFinite()) throw InputError("simulate", "A must be finite");

  auto nonzero = [&](int r, int c) { return A(r, c) != 0.0; };
  std::vector<Edge> edges;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      bool present = nonzero(i, j) || nonzero(j, i);
      for (int k = 0; !present && k < p; ++k) {
        present = nonzero(k, i) && nonzero(k, j);
      }
      if (present) edges.emplace_back(i, j);
    }
  }
  return edges;
}

VarModel sample_var_model(const SimConfig& config, Rng& rng,
                          int max_attempts) {
  config.validate();
  if (max_attempts < 1) {
    throw ConfigError("simulate", "max_attempts must be positive");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(config.p, config.p);
    for (int i = 0; i < config.p; ++i) {
      A(i, i) = config.diag_value;
      for (int j = i + 1; j < config.p; ++j) {
        if (rng.next_bernoulli(config.rho)) A(i, j) = config.offdiag_value;
      }
    }
    std::vector<Edge> edges = var1_true_graph(A);
    if (config.require_decomposable && !is_decomposable(config.p, edges)) {
      continue;
    }
    return VarModel{std::move(A), std::move(edges)};
  }
  throw NumericalError("simulate",
                       "no decomposable true graph found in " +
                           std::to_string(max_attempts) + " attempts");
}

TimeSeriesPanel generate_panel(const VarModel& model, int T, int N,
                               int burn_in, Rng& rng) {
  if (T < 1 || N < 1) throw ConfigError("simulate", "T and N must be >= 1");
  if (burn_in < 0) throw ConfigError("simulate", "negative burn_in");
  const int p = static_cast<int>(model.A.rows());

  TimeSeriesPanel panel;
  panel.replicates.reserve(static_cast<std::size_t>(N));
  Eigen::VectorXd noise(p);
  for (int n = 0; n < N; ++n) {
    Eigen::MatrixXd series(T, p);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    for (int t = 0; t < burn_in + T; ++t) {
      for (int i = 0; i < p; ++i) noise(i) = rng.next_normal();
      x = model.A * x + noise;
      if (t >= burn_in) series.row(t - burn_in) = x.transpose();
    }
    panel.replicates.push_back(std::move(series));
  }
  panel.mean_centered = false;
  return panel;
}

RecoveryMetrics recovery_metrics(const std::vector<Edge>& estimated,
                                 const std::vector<Edge>& truth, int p) {
  auto normalize = [&](const std::vector<Edge>& edges) {
    std::set<Edge> out;
    for (const auto& [i, j] : edges) {
      if (i < 0 || j < 0 || i >= p || j >= p || i == j) {
        throw InputError("simulate", "edge (" + std::to_string(i) + "," +
                                         std::to_string(j) +
                                         ") is invalid for p=" +
                                         std::to_string(p));
      }
      out.insert(make_edge(i, j));
    }
    return out;
  };
  const std::set<Edge> est = normalize(estimated);
  const std::set<Edge> tru = normalize(truth);

  RecoveryMetrics metrics;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const bool in_est = est.count({i, j}) > 0;
      const bool in_tru = tru.count({i, j}) > 0;
      if (in_tru) {
        ++(in_est ? metrics.tp : metrics.fn);
      } else {
        ++(in_est ? metrics.fp : metrics.tn);
      }
    }
  }
  metrics.tpr = metrics.tp + metrics.fn == 0
                    ? 1.0
                    : static_cast<double>(metrics.tp) /
                          static_cast<double>(metrics.tp + metrics.fn);
  metrics.fpr = metrics.fp + metrics.tn == 0
                    ? 0.0
                    : static_cast<double>(metrics.fp) /
                          static_cast<double>(metrics.fp + metrics.tn);
  return metrics;
}

std::string model_to_json(const VarModel& model, std::uint64_t seed) {
  nlohmann::json j;
  const int p = static_cast<int>(model.A.rows());
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < p; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < p; ++c) row.push_back(model.A(i, c));
    rows.push_back(std::move(row));
  }
  j["A"] = std::move(rows);
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [i, jj] : model.true_graph_edges) {
    edges.push_back(nlohmann::json::array({i, jj}));
  }
  j["true_edges"] = std::move(edges);
  j["seed"] = seed;
  return j.dump();
}

VarModel model_from_json(const std::string& text, std::uint64_t* seed_out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("simulate", std::string("bad model JSON: ") + e.what());
  }
  if (!j.contains("A") || !j["A"].is_array()) {
    throw InputError("simulate", "model JSON missing matrix \"A\"");
  }
  const auto& rows = j["A"];
  const int p = static_cast<int>(rows.size());
  Eigen::MatrixXd A(p, p);
  for (int i = 0; i < p; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != p) {
      throw InputError("simulate", "model JSON matrix \"A\" is not square");
    }
    for (int c = 0; c < p; ++c) A(i, c) = rows[i][c].get<double>();
  }
  VarModel model;
  model.A = std::move(A);
  if (j.contains("true_edges")) {
    for (const auto& pair : j["true_edges"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw InputError("simulate", "model JSON edge is not a pair");
      }
      model.true_graph_edges.push_back(
          make_edge(pair[0].get<int>(), pair[1].get<int>()));
    }
    std::sort(model.true_graph_edges.begin(), model.true_graph_edges.end());
  } else {
    model.true_graph_edges = var1_true_graph(model.A);
  }
  if (seed_out != nullptr) {
    *seed_out = j.value("seed", static_cast<std::uint64_t>(0));
  }
  return model;
}

}  // namespace specgraph
