#include "specgraph/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specgraph/errors.hpp"

namespace specgraph {

namespace {

const double kLogPi = std::log(std::numbers::pi);

Eigen::MatrixXcd principal_submatrix(const Eigen::MatrixXcd& m,
                                     const std::vector<int>& index_set) {
  const auto q = static_cast<Eigen::Index>(index_set.size());
  Eigen::MatrixXcd sub(q, q);
  for (Eigen::Index r = 0; r < q; ++r) {
    for (Eigen::Index c = 0; c < q; ++c) {
      sub(r, c) = m(index_set[r], index_set[c]);
    }
  }
  return sub;
}

// sum_{i=1}^{q} lgamma(dof + i)
double log_gamma_ladder(double dof, int q) {
  double total = 0.0;
  for (int i = 1; i <= q; ++i) total += std::lgamma(dof + i);
  return total;
}

std::string subset_to_string(const std::vector<int>& subset) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i > 0) out << ',';
    out << subset[i];
  }
  out << '}';
  return out.str();
}

void check_entry_count(const HiwPrior& prior, const SpectralStatistics& stats) {
  if (prior.mode == HiwPrior::Mode::Explicit &&
      prior.scale_matrices.size() != stats.entries.size()) {
    throw InputError("likelihood",
                     "explicit prior has " +
                         std::to_string(prior.scale_matrices.size()) +
                         " entries but statistics have " +
                         std::to_string(stats.entries.size()));
  }
}

void check_fractional_rank(const SpectralStatistics& stats,
                           const DecomposableGraph& graph) {
  const int needed = graph.max_clique_size() + 1;
  if (stats.min_dof() + 1e-12 < needed) {
    throw NumericalError(
        "likelihood",
        "fractional rank guard: largest clique has " +
            std::to_string(graph.max_clique_size()) +
            " nodes but the smallest entry dof is " +
            std::to_string(stats.min_dof()) +
            "; increase smoothing/binning or the replicate count");
  }
}

// Per-entry contribution of one node subset, excluding the pi constant.
// The pi factors of the two normalizers cancel (same q). Fractional mode
// needs a single factorization because log|g W| = q log g + log|W|.
double subset_entry_term(const SpectralEntry& entry,
                         const std::vector<int>& subset,
                         const HiwPrior& prior,
                         const Eigen::MatrixXcd* explicit_scale,
                         double explicit_dof) {
  const int q = static_cast<int>(subset.size());
  if (q == 0) return 0.0;

  if (prior.mode == HiwPrior::Mode::Fractional) {
    const double g = prior.g;
    const double dof = entry.dof;
    const Eigen::MatrixXcd stat_sub = principal_submatrix(entry.stat, subset);
    const double logdet = hermitian_chol_logdet(stat_sub, prior.jitter);
    const double prior_part = (g * dof + q) * (q * std::log(g) + logdet) -
                              log_gamma_ladder(g * dof, q);
    const double post_part = (dof + q) * logdet - log_gamma_ladder(dof, q);
    return entry.weight * (prior_part - post_part);
  }

  const Eigen::MatrixXcd prior_sub =
      principal_submatrix(*explicit_scale, subset);
  const Eigen::MatrixXcd post_sub =
      principal_submatrix(*explicit_scale + entry.stat, subset);
  const double post_dof = explicit_dof + entry.dof;
  const double prior_part =
      (explicit_dof + q) * hermitian_chol_logdet(prior_sub, prior.jitter) -
      log_gamma_ladder(explicit_dof, q);
  const double post_part =
      (post_dof + q) * hermitian_chol_logdet(post_sub, prior.jitter) -
      log_gamma_ladder(post_dof, q);
  return entry.weight * (prior_part - post_part);
}

}  // namespace

HiwPrior HiwPrior::fractional(double g, double jitter) {
  HiwPrior prior;
  prior.mode = Mode::Fractional;
  prior.g = g;
  prior.jitter = jitter;
  prior.validate();
  return prior;
}

HiwPrior HiwPrior::explicit_prior(std::vector<Eigen::MatrixXcd> scale_matrices,
                                  std::vector<double> prior_dofs,
                                  double jitter) {
  HiwPrior prior;
  prior.mode = Mode::Explicit;
  prior.scale_matrices = std::move(scale_matrices);
  prior.prior_dofs = std::move(prior_dofs);
  prior.jitter = jitter;
  prior.validate();
  return prior;
}

void HiwPrior::validate() const {
  if (jitter < 0.0) throw ConfigError("likelihood", "negative jitter");
  if (mode == Mode::Fractional) {
    if (!(g > 0.0 && g < 1.0)) {
      throw ConfigError("likelihood", "fractional parameter g must lie in "
                                      "(0, 1); got " + std::to_string(g));
    }
    return;
  }
  if (scale_matrices.size() != prior_dofs.size()) {
    throw ConfigError("likelihood",
                      "explicit prior scale/dof lists differ in length");
  }
  for (double d : prior_dofs) {
    if (!(d > 0.0)) {
      throw ConfigError("likelihood", "explicit prior dofs must be positive");
    }
  }
}

double hermitian_chol_logdet(const Eigen::MatrixXcd& matrix, double jitter,
                             const std::string& context) {
  const auto q = matrix.rows();
  if (q != matrix.cols()) {
    throw InputError("likelihood", "log-determinant of non-square matrix");
  }
  if (q == 0) return 0.0;

  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw InputError("likelihood", "matrix is not Hermitian" +
                                       (context.empty() ? "" : " " + context));
  }

  auto try_factor = [&](const Eigen::MatrixXcd& m) -> std::pair<bool, double> {
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success) return {false, 0.0};
    double logdet = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < q; ++i) logdet += std::log(L(i, i).real());
    return {true, 2.0 * logdet};
  };

  auto [ok, logdet] = try_factor(matrix);
  if (ok) return logdet;

  const double ridge = jitter * matrix.trace().real() / static_cast<double>(q);
  if (ridge > 0.0) {
    auto [ok2, logdet2] = try_factor(
        matrix + ridge * Eigen::MatrixXcd::Identity(q, q));
    if (ok2) return logdet2;
  }
  throw NumericalError("likelihood",
                       "matrix not positive definite after jitter" +
                           (context.empty() ? "" : " " + context));
}

double log_complex_iw_normalizer(const Eigen::MatrixXcd& scale, double dof,
                                 double jitter, const std::string& context) {
  const int q = static_cast<int>(scale.rows());
  if (q == 0) return 0.0;
  if (!(dof > 0.0)) {
    throw ConfigError("likelihood", "degrees of freedom must be positive");
  }
  const double logdet = hermitian_chol_logdet(scale, jitter, context);
  return (dof + q) * logdet - 0.5 * q * (q - 1) * kLogPi -
         log_gamma_ladder(dof, q);
}

double log_h(const Eigen::MatrixXcd& scale, double dof,
             const DecomposableGraph& graph, double jitter) {
  if (scale.rows() != graph.num_nodes()) {
    throw InputError("likelihood", "scale matrix dimension " +
                                       std::to_string(scale.rows()) +
                                       " does not match graph on " +
                                       std::to_string(graph.num_nodes()) +
                                       " nodes");
  }
  const auto& decomp = graph.decomposition();
  double total = 0.0;
  for (const auto& clique : decomp.cliques) {
    total += log_complex_iw_normalizer(principal_submatrix(scale, clique), dof,
                                       jitter, "clique " +
                                       subset_to_string(clique));
  }
  for (const auto& sep : decomp.separators) {
    if (sep.empty()) continue;
    total -= log_complex_iw_normalizer(principal_submatrix(scale, sep), dof,
                                       jitter,
                                       "separator " + subset_to_string(sep));
  }
  return total;
}

double log_marginal_likelihood(const SpectralStatistics& stats,
                               const DecomposableGraph& graph,
                               const HiwPrior& prior) {
  prior.validate();
  check_entry_count(prior, stats);
  if (stats.dim != graph.num_nodes()) {
    throw InputError("likelihood",
                     "statistics dimension does not match graph");
  }
  if (prior.mode == HiwPrior::Mode::Fractional) {
    check_fractional_rank(stats, graph);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < stats.entries.size(); ++i) {
    const auto& entry = stats.entries[i];
    double term;
    try {
      if (prior.mode == HiwPrior::Mode::Fractional) {
        const Eigen::MatrixXcd prior_scale = prior.g * entry.stat;
        term = log_h(prior_scale, prior.g * entry.dof, graph, prior.jitter) -
               log_h(entry.stat, entry.dof, graph, prior.jitter);
      } else {
        const Eigen::MatrixXcd post_scale =
            prior.scale_matrices[i] + entry.stat;
        term = log_h(prior.scale_matrices[i], prior.prior_dofs[i], graph,
                     prior.jitter) -
               log_h(post_scale, prior.prior_dofs[i] + entry.dof, graph,
                     prior.jitter);
      }
    } catch (const NumericalError& e) {
      throw NumericalError("likelihood",
                           std::string(e.what()) + " (entry k=[" +
                               std::to_string(entry.freq_lo) + "," +
                               std::to_string(entry.freq_hi) + "])");
    }
    total += entry.weight * term;
  }
  return total - stats.total_dof() * stats.dim * kLogPi;
}

double log_fractional_marginal(const SpectralStatistics& stats,
                               const DecomposableGraph& graph, double g,
                               double jitter) {
  return log_marginal_likelihood(stats, graph,
                                 HiwPrior::fractional(g, jitter));
}

double clique_log_marginal(const std::vector<int>& clique,
                           const SpectralStatistics& stats,
                           const HiwPrior& prior) {
  prior.validate();
  check_entry_count(prior, stats);
  std::vector<int> subset = clique;
  std::sort(subset.begin(), subset.end());
  double total = 0.0;
  for (std::size_t i = 0; i < stats.entries.size(); ++i) {
    const Eigen::MatrixXcd* explicit_scale =
        prior.mode == HiwPrior::Mode::Explicit ? &prior.scale_matrices[i]
                                               : nullptr;
    const double explicit_dof =
        prior.mode == HiwPrior::Mode::Explicit ? prior.prior_dofs[i] : 0.0;
    total += subset_entry_term(stats.entries[i], subset, prior, explicit_scale,
                               explicit_dof);
  }
  return total;
}

double predictive_log_likelihood(const SpectralStatistics& train,
                                 const SpectralStatistics& test,
                                 const DecomposableGraph& graph,
                                 double jitter) {
  if (train.dim != test.dim || train.series_length != test.series_length ||
      train.entries.size() != test.entries.size()) {
    throw InputError("likelihood",
                     "train and test statistics are not aligned");
  }
  for (std::size_t i = 0; i < train.entries.size(); ++i) {
    const auto& a = train.entries[i];
    const auto& b = test.entries[i];
    if (a.freq_lo != b.freq_lo || a.freq_hi != b.freq_hi ||
        a.weight != b.weight) {
      throw InputError("likelihood",
                       "train/test frequency entries differ at index " +
                           std::to_string(i));
    }
  }
  std::vector<Eigen::MatrixXcd> scales;
  std::vector<double> dofs;
  scales.reserve(train.entries.size());
  dofs.reserve(train.entries.size());
  for (const auto& e : train.entries) {
    scales.push_back(e.stat);
    dofs.push_back(e.dof);
  }
  return log_marginal_likelihood(
      test, graph, HiwPrior::explicit_prior(std::move(scales), std::move(dofs),
                                            jitter));
}

std::string scored_graph_to_json(const ScoredGraph& scored) {
  nlohmann::json j;
  j["graph"] = nlohmann::json::parse(graph_to_json(scored.graph));
  j["log_marginal"] = scored.log_marginal;
  j["log_prior"] = scored.log_prior;
  j["log_posterior"] = scored.log_posterior;
  return j.dump();
}

ScoreEngine::ScoreEngine(const SpectralStatistics& stats, HiwPrior prior,
                         GraphPriorConfig prior_config, int reduction_chunks)
    : stats_(&stats),
      prior_(std::move(prior)),
      prior_config_(prior_config),
      reduction_chunks_(std::max(1, reduction_chunks)) {
  prior_.validate();
  check_entry_count(prior_, stats);
  if (prior_.mode == HiwPrior::Mode::Fractional) {
    const double bound = std::floor(stats.min_dof() + 1e-12) - 1.0;
    max_clique_bound_ =
        bound < static_cast<double>(std::numeric_limits<int>::max())
            ? static_cast<int>(bound)
            : std::numeric_limits<int>::max();
  } else {
    max_clique_bound_ = std::numeric_limits<int>::max();
  }
  pi_constant_ = -stats.total_dof() * stats.dim * kLogPi;
}

double ScoreEngine::subset_score(const std::vector<int>& subset) const {
  if (subset.empty()) return 0.0;
  std::string key;
  key.reserve(subset.size() * 3);
  for (int v : subset) {
    key += std::to_string(v);
    key += ',';
  }
  if (auto it = subset_cache_.find(key); it != subset_cache_.end()) {
    return it->second;
  }

  const auto& entries = stats_->entries;
  auto range_sum = [&](std::size_t lo, std::size_t hi) {
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Eigen::MatrixXcd* explicit_scale =
          prior_.mode == HiwPrior::Mode::Explicit ? &prior_.scale_matrices[i]
                                                  : nullptr;
      const double explicit_dof =
          prior_.mode == HiwPrior::Mode::Explicit ? prior_.prior_dofs[i] : 0.0;
      sum += subset_entry_term(entries[i], subset, prior_, explicit_scale,
                               explicit_dof);
    }
    return sum;
  };

  double total = 0.0;
  try {
    if (reduction_chunks_ == 1 || entries.size() < 2) {
      total = range_sum(0, entries.size());
    } else {
      // fixed chunk boundaries keep the reduction order deterministic
      const std::size_t n = entries.size();
      const std::size_t chunks = std::min<std::size_t>(reduction_chunks_, n);
      const std::size_t step = (n + chunks - 1) / chunks;
      std::vector<std::future<double>> parts;
      for (std::size_t lo = 0; lo < n; lo += step) {
        const std::size_t hi = std::min(n, lo + step);
        parts.push_back(std::async(std::launch::async, range_sum, lo, hi));
      }
      for (auto& part : parts) total += part.get();
    }
  } catch (const NumericalError& e) {
    throw NumericalError("likelihood", std::string(e.what()) + " (subset " +
                                           subset_to_string(subset) + ")");
  }

  subset_cache_.emplace(std::move(key), total);
  return total;
}

double ScoreEngine::log_marginal(const DecomposableGraph& graph) const {
  if (stats_->dim != graph.num_nodes()) {
    throw InputError("likelihood",
                     "statistics dimension does not match graph");
  }
  if (graph.max_clique_size() > max_clique_bound_) {
    check_fractional_rank(*stats_, graph);  // throws with the full message
  }
  const auto& decomp = graph.decomposition();
  double total = pi_constant_;
  for (const auto& clique : decomp.cliques) total += subset_score(clique);
  for (const auto& sep : decomp.separators) total -= subset_score(sep);
  return total;
}

ScoredGraph ScoreEngine::score(const DecomposableGraph& graph) const {
  const double lm = log_marginal(graph);
  const double lp = log_graph_prior(graph, prior_config_);
  return ScoredGraph{graph, lm, lp, lm + lp};
}

}  // namespace specgraph
