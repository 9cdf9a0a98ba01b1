#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specgraph/graph.hpp"
#include "specgraph/likelihood.hpp"
#include "specgraph/search.hpp"
#include "specgraph/simulate.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

struct SmoothingSpec {
  enum class Kind { None, Daniell, Bartlett, Piecewise };
  Kind kind = Kind::None;
  int param = 0;  // Daniell half-width m, or segment/bin count M

  /// "none" | "daniell:m" | "bartlett:M" | "piecewise:M"
  static SmoothingSpec parse(const std::string& text);
  std::string to_string() const;
};

struct PreprocessOptions {
  bool log_returns = false;
  bool center = true;
  /// Required to disable centering: an uncentered series loads its mean
  /// into the k=0 coefficient, which is then kept in the statistics.
  bool keep_dc_unsafe = false;
};

/// Which smoothing a command picks when the user gives none.
enum class SmoothingDefault {
  LearnRule,    // N == 1: piecewise(floor(sqrt T)); N > 1: none
  DaniellRule,  // daniell(max(1, floor(sqrt(T) / 2)))
};

struct PreparedStats {
  SpectralStatistics stats;
  SmoothingSpec smoothing;  // resolved
  bool folded = false;
  bool drop_dc = true;
  int panel_T = 0;  // after preprocessing, before any Bartlett split
  int panel_N = 0;
  std::vector<std::string> columns;
};

/// ingest -> optional log returns -> centering -> periodogram -> smoothing,
/// folding to the half spectrum whenever entries stay per-frequency.
PreparedStats prepare_stats(const std::vector<std::filesystem::path>& data,
                            const PreprocessOptions& preprocess,
                            const std::optional<SmoothingSpec>& smoothing,
                            SmoothingDefault default_rule);

struct LearnOptions {
  std::vector<std::filesystem::path> data;
  std::filesystem::path out_dir;
  PreprocessOptions preprocess{};
  std::optional<SmoothingSpec> smoothing{};
  std::optional<double> g{};  // default 4 / (smallest entry dof)
  double prior_a = 1.0;
  double prior_b = 1.0;
  int iterations = 10000;
  int restarts = 1;
  int global_move_period = 50;
  int resample_period = 100;
  double edge_prob_smoothing = 1.0;
  std::uint64_t seed = 0;
};

/// Writes graph.json, graph.dot, edge_probs.csv, trace.ndjson,
/// run_meta.json. Restart r uses seed + r; the best final score wins, ties
/// broken toward the lower restart index.
void cmd_learn(const LearnOptions& options);

struct SimulateOptions {
  SimConfig sim{};
  int burn_in = 500;
  std::filesystem::path out_dir;
};

/// Writes rep_NNNN.csv per replicate, model.json, run_meta.json.
void cmd_simulate(const SimulateOptions& options);

struct EvaluateOptions {
  std::filesystem::path graph_path;
  std::filesystem::path model_path;
  std::filesystem::path out_dir;
};

/// Writes metrics.json, run_meta.json.
void cmd_evaluate(const EvaluateOptions& options);

struct PredictOptions {
  std::vector<std::filesystem::path> train;
  std::vector<std::filesystem::path> test;
  std::filesystem::path graph_path;
  std::filesystem::path out_dir;
  PreprocessOptions preprocess{};
  std::optional<SmoothingSpec> smoothing{};
  double jitter = 1e-8;
};

/// Scores the held-out statistics under the given, empty, and complete
/// graphs with the training statistics as prior; writes predictive.json and
/// run_meta.json.
void cmd_predict(const PredictOptions& options);

struct SpectraOptions {
  std::vector<std::filesystem::path> data;
  std::filesystem::path out_dir;
  PreprocessOptions preprocess{};
  std::optional<SmoothingSpec> smoothing{};
  /// "auto" (diagonal only), "all", "none", or an explicit "0-1,2-3" list.
  std::string pairs = "auto";
};

/// Writes spectra.csv (columns freq,i,j,re,im; freq in cycles per sample)
/// and run_meta.json.
void cmd_spectra(const SpectraOptions& options);

/// Accepts both the bare {"p","edges"} shape and the scored wrapper with a
/// "graph" member.
DecomposableGraph load_graph_file(const std::filesystem::path& path);

}  // namespace specgraph
