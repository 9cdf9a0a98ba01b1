#include "specgraph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specgraph/csv.hpp"
#include "specgraph/errors.hpp"
#include "specgraph/rng.hpp"

namespace specgraph {

namespace {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cli", "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cli", "cannot write " + path.string());
  out << content;
  if (!out) throw InputError("cli", "failed while writing " + path.string());
}

void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw InputError("cli", "cannot create output directory " + dir.string() +
                                ": " + ec.message());
  }
}

std::string fmt17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

json paths_to_json(const std::vector<std::filesystem::path>& paths) {
  json arr = json::array();
  for (const auto& p : paths) arr.push_back(p.string());
  return arr;
}

json prepared_meta(const PreparedStats& prepared,
                   const PreprocessOptions& preprocess) {
  json j;
  j["smoothing"] = prepared.smoothing.to_string();
  j["folded"] = prepared.folded;
  j["drop_dc"] = prepared.drop_dc;
  j["center"] = preprocess.center;
  j["log_returns"] = preprocess.log_returns;
  j["T"] = prepared.panel_T;
  j["N"] = prepared.panel_N;
  j["p"] = prepared.stats.dim;
  j["columns"] = prepared.columns;
  j["excluded_frequencies"] = prepared.stats.excluded_frequencies;
  j["total_dof"] = prepared.stats.total_dof();
  j["min_dof"] = prepared.stats.min_dof();
  j["rng"] = kRngId;
  return j;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text, int p) {
  std::vector<std::pair<int, int>> pairs;
  if (text == "none") return pairs;
  if (text == "auto") {
    for (int i = 0; i < p; ++i) pairs.emplace_back(i, i);
    return pairs;
  }
  if (text == "all") {
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) pairs.emplace_back(i, j);
    }
    return pairs;
  }
  std::set<std::pair<int, int>> seen;
  std::istringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const auto dash = token.find('-');
    int i = -1;
    int j = -1;
    try {
      if (dash == std::string::npos) throw std::invalid_argument(token);
      i = std::stoi(token.substr(0, dash));
      j = std::stoi(token.substr(dash + 1));
    } catch (const std::exception&) {
      throw ConfigError("cli", "bad --pairs entry \"" + token +
                                   "\"; expected i-j (e.g. 0-1) or one of "
                                   "auto, all, none");
    }
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= p) {
      throw ConfigError("cli", "--pairs entry \"" + token +
                                   "\" is out of range for p=" +
                                   std::to_string(p));
    }
    seen.emplace(i, j);
  }
  pairs.assign(seen.begin(), seen.end());
  return pairs;
}

}  // namespace

SmoothingSpec SmoothingSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  SmoothingSpec spec;
  if (name == "none") {
    if (colon != std::string::npos) {
      throw ConfigError("cli", "smoothing \"none\" takes no parameter");
    }
    return spec;
  }
  if (name == "daniell") {
    spec.kind = Kind::Daniell;
  } else if (name == "bartlett") {
    spec.kind = Kind::Bartlett;
  } else if (name == "piecewise") {
    spec.kind = Kind::Piecewise;
  } else {
    throw ConfigError("cli", "unknown smoothing mode \"" + text +
                                 "\"; expected none, daniell:m, bartlett:M, "
                                 "or piecewise:M");
  }
  if (colon == std::string::npos || colon + 1 == text.size()) {
    throw ConfigError("cli",
                      "smoothing \"" + name + "\" needs a parameter, e.g. " +
                          name + ":8");
  }
  int param = 0;
  try {
    std::size_t used = 0;
    param = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("cli", "bad smoothing parameter in \"" + text + "\"");
  }
  if (param < 1) {
    throw ConfigError("cli", "smoothing parameter must be >= 1 in \"" + text +
                                 "\"");
  }
  spec.param = param;
  return spec;
}

std::string SmoothingSpec::to_string() const {
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::Daniell:
      return "daniell:" + std::to_string(param);
    case Kind::Bartlett:
      return "bartlett:" + std::to_string(param);
    case Kind::Piecewise:
      return "piecewise:" + std::to_string(param);
  }
  return "none";
}

PreparedStats prepare_stats(const std::vector<std::filesystem::path>& data,
                            const PreprocessOptions& preprocess,
                            const std::optional<SmoothingSpec>& smoothing,
                            SmoothingDefault default_rule) {
  std::vector<std::string> columns;
  TimeSeriesPanel panel = ingest_csv(data, &columns);
  if (preprocess.log_returns) panel = log_return_transform(panel);

  bool drop_dc = true;
  if (preprocess.center) {
    panel = mean_center(std::move(panel));
  } else if (preprocess.keep_dc_unsafe) {
    drop_dc = false;
  } else {
    throw ConfigError("cli",
                      "--no-center keeps the series mean in the k=0 "
                      "coefficient; pass --keep-dc-unsafe to accept that, or "
                      "drop --no-center");
  }

  const int T = panel.series_length();
  const int N = panel.num_replicates();

  SmoothingSpec resolved;
  if (smoothing.has_value()) {
    resolved = *smoothing;
  } else if (default_rule == SmoothingDefault::LearnRule) {
    if (N == 1) {
      resolved.kind = SmoothingSpec::Kind::Piecewise;
      resolved.param =
          std::max(1, static_cast<int>(std::floor(std::sqrt(T))));
    }
  } else {
    resolved.kind = SmoothingSpec::Kind::Daniell;
    resolved.param =
        std::max(1, static_cast<int>(std::floor(std::sqrt(T) / 2.0)));
  }

  PeriodogramOptions options;
  options.drop_dc = drop_dc;
  options.require_centered = preprocess.center;

  SpectralStatistics stats;
  switch (resolved.kind) {
    case SmoothingSpec::Kind::None:
      stats = aggregate_periodogram(panel, options);
      break;
    case SmoothingSpec::Kind::Daniell:
      stats = daniell_smooth(aggregate_periodogram(panel, options),
                             resolved.param);
      break;
    case SmoothingSpec::Kind::Piecewise:
      stats = piecewise_bin(aggregate_periodogram(panel, options),
                            resolved.param);
      break;
    case SmoothingSpec::Kind::Bartlett: {
      TimeSeriesPanel segments;
      for (const auto& series : panel.replicates) {
        TimeSeriesPanel split = bartlett_split(series, resolved.param);
        for (auto& segment : split.replicates) {
          segments.replicates.push_back(std::move(segment));
        }
      }
      segments.mean_centered = false;
      PeriodogramOptions segment_options = options;
      segment_options.require_centered = false;  // centered before the split
      stats = aggregate_periodogram(segments, segment_options);
      break;
    }
  }
  if (stats.entries.empty()) {
    throw InputError("cli",
                     "no retained frequencies; the series is too short for "
                     "the requested settings");
  }

  PreparedStats out;
  out.drop_dc = drop_dc;
  out.smoothing = resolved;
  out.panel_T = T;
  out.panel_N = N;
  out.columns = std::move(columns);
  if (drop_dc && stats.is_per_frequency() && stats.series_length >= 2) {
    out.stats = fold_conjugate_pairs(stats);
    out.folded = true;
  } else {
    out.stats = std::move(stats);
  }
  return out;
}

void cmd_learn(const LearnOptions& options) {
  if (options.iterations < 0) {
    throw ConfigError("cli", "iterations must be >= 0");
  }
  if (options.restarts < 1) throw ConfigError("cli", "restarts must be >= 1");
  if (!(options.prior_a > 0.0) || !(options.prior_b > 0.0)) {
    throw ConfigError("cli", "prior a and b must be positive");
  }

  PreparedStats prepared = prepare_stats(
      options.data, options.preprocess, options.smoothing,
      SmoothingDefault::LearnRule);
  const SpectralStatistics& stats = prepared.stats;

  const double min_dof = stats.min_dof();
  if (stats.dim >= 2 && std::floor(min_dof + 1e-12) - 1.0 < 2.0) {
    throw NumericalError(
        "cli", "smallest entry dof " + fmt(min_dof) +
                   " cannot score any edge (a 2-clique needs dof >= 3); add "
                   "replicates or smooth harder, e.g. --smoothing "
                   "piecewise:M or daniell:m");
  }
  const double g = options.g.value_or(4.0 / min_dof);
  if (!(g > 0.0 && g < 1.0)) {
    if (options.g.has_value()) {
      throw ConfigError("cli", "--g " + fmt(g) + " must lie in (0, 1)");
    }
    throw ConfigError("cli", "default g = 4/min_dof = " + fmt(g) +
                                 " is not in (0, 1); pass --g explicitly or "
                                 "increase smoothing");
  }

  SearchConfig config;
  config.iterations = options.iterations;
  config.global_move_period = options.global_move_period;
  config.resample_period = options.resample_period;
  config.edge_prob_smoothing = options.edge_prob_smoothing;
  config.prior = GraphPriorConfig{options.prior_a, options.prior_b};
  config.scoring = HiwPrior::fractional(g);
  config.validate();

  std::vector<SearchResult> results;
  results.reserve(static_cast<std::size_t>(options.restarts));
  if (options.restarts == 1) {
    config.seed = options.seed;
    results.push_back(fincs_run(stats, config));
  } else {
    std::vector<std::future<SearchResult>> futures;
    futures.reserve(static_cast<std::size_t>(options.restarts));
    for (int r = 0; r < options.restarts; ++r) {
      SearchConfig restart_config = config;
      restart_config.seed = options.seed + static_cast<std::uint64_t>(r);
      futures.push_back(std::async(
          std::launch::async,
          [&stats, restart_config] { return fincs_run(stats, restart_config); }));
    }
    for (auto& future : futures) results.push_back(future.get());
  }
  int winner = 0;
  for (int r = 1; r < static_cast<int>(results.size()); ++r) {
    if (results[r].map_graph.log_posterior >
        results[winner].map_graph.log_posterior) {
      winner = r;
    }
  }
  const SearchResult& best = results[static_cast<std::size_t>(winner)];

  ensure_out_dir(options.out_dir);
  write_text_file(options.out_dir / "graph.json",
                  scored_graph_to_json(best.map_graph) + "\n");
  write_text_file(options.out_dir / "graph.dot",
                  graph_to_dot(best.map_graph.graph, prepared.columns));
  write_matrix_csv(options.out_dir / "edge_probs.csv",
                   best.edge_probabilities);

  std::ostringstream trace;
  json header;
  header["type"] = "header";
  header["rng"] = kRngId;
  header["seed"] = options.seed + static_cast<std::uint64_t>(winner);
  header["restart"] = winner;
  header["iterations"] = options.iterations;
  header["global_move_period"] = options.global_move_period;
  header["resample_period"] = options.resample_period;
  header["edge_prob_smoothing"] = options.edge_prob_smoothing;
  trace << header.dump() << '\n';
  for (const auto& record : best.trace) {
    json line;
    line["iter"] = record.iteration;
    line["move"] = record.move;
    line["accepted"] = record.accepted;
    line["log_posterior"] = record.log_posterior;
    trace << line.dump() << '\n';
  }
  write_text_file(options.out_dir / "trace.ndjson", trace.str());

  json meta = prepared_meta(prepared, options.preprocess);
  meta["command"] = "learn";
  meta["data"] = paths_to_json(options.data);
  meta["out"] = options.out_dir.string();
  meta["seed"] = options.seed;
  meta["iterations"] = options.iterations;
  meta["restarts"] = options.restarts;
  meta["winning_restart"] = winner;
  meta["g"] = g;
  meta["prior_a"] = options.prior_a;
  meta["prior_b"] = options.prior_b;
  meta["edge_prob_smoothing"] = options.edge_prob_smoothing;
  meta["global_move_period"] = options.global_move_period;
  meta["resample_period"] = options.resample_period;
  meta["log_posterior"] = best.map_graph.log_posterior;
  meta["num_edges"] = best.map_graph.graph.num_edges();
  write_text_file(options.out_dir / "run_meta.json", meta.dump(2) + "\n");
}

void cmd_simulate(const SimulateOptions& options) {
  options.sim.validate();
  if (options.burn_in < 0) throw ConfigError("cli", "burn_in must be >= 0");

  Rng rng(options.sim.seed);
  VarModel model = sample_var_model(options.sim, rng);
  TimeSeriesPanel panel =
      generate_panel(model, options.sim.T, options.sim.N, options.burn_in, rng);

  ensure_out_dir(options.out_dir);
  std::vector<std::string> columns;
  columns.reserve(static_cast<std::size_t>(options.sim.p));
  for (int c = 0; c < options.sim.p; ++c) {
    columns.push_back("x" + std::to_string(c));
  }
  for (int n = 0; n < options.sim.N; ++n) {
    char name[32];
    std::snprintf(name, sizeof(name), "rep_%04d.csv", n);
    write_panel_csv(options.out_dir / name,
                    panel.replicates[static_cast<std::size_t>(n)], columns);
  }
  write_text_file(options.out_dir / "model.json",
                  model_to_json(model, options.sim.seed) + "\n");

  json meta;
  meta["command"] = "simulate";
  meta["p"] = options.sim.p;
  meta["T"] = options.sim.T;
  meta["N"] = options.sim.N;
  meta["rho"] = options.sim.rho;
  meta["diag_value"] = options.sim.diag_value;
  meta["offdiag_value"] = options.sim.offdiag_value;
  meta["seed"] = options.sim.seed;
  meta["burn_in"] = options.burn_in;
  meta["require_decomposable"] = options.sim.require_decomposable;
  meta["num_true_edges"] = model.true_graph_edges.size();
  meta["rng"] = kRngId;
  meta["out"] = options.out_dir.string();
  write_text_file(options.out_dir / "run_meta.json", meta.dump(2) + "\n");
}

void cmd_evaluate(const EvaluateOptions& options) {
  DecomposableGraph graph = load_graph_file(options.graph_path);
  VarModel model = model_from_json(read_text_file(options.model_path));
  const int p = static_cast<int>(model.A.rows());
  if (graph.num_nodes() != p) {
    throw InputError("cli", "estimated graph has " +
                                std::to_string(graph.num_nodes()) +
                                " nodes but the model has " +
                                std::to_string(p));
  }
  const RecoveryMetrics metrics =
      recovery_metrics(graph.edges(), model.true_graph_edges, p);

  ensure_out_dir(options.out_dir);
  json mj;
  mj["tpr"] = metrics.tpr;
  mj["fpr"] = metrics.fpr;
  mj["tp"] = metrics.tp;
  mj["fp"] = metrics.fp;
  mj["fn"] = metrics.fn;
  mj["tn"] = metrics.tn;
  mj["p"] = p;
  write_text_file(options.out_dir / "metrics.json", mj.dump(2) + "\n");

  json meta;
  meta["command"] = "evaluate";
  meta["graph"] = options.graph_path.string();
  meta["model"] = options.model_path.string();
  meta["out"] = options.out_dir.string();
  write_text_file(options.out_dir / "run_meta.json", meta.dump(2) + "\n");
}

void cmd_predict(const PredictOptions& options) {
  PreparedStats train = prepare_stats(options.train, options.preprocess,
                                      options.smoothing,
                                      SmoothingDefault::DaniellRule);
  PreparedStats test =
      prepare_stats(options.test, options.preprocess,
                    std::optional<SmoothingSpec>(train.smoothing),
                    SmoothingDefault::DaniellRule);
  if (train.columns != test.columns) {
    throw InputError("cli", "train and test column headers differ");
  }

  const int p = train.stats.dim;
  DecomposableGraph given = load_graph_file(options.graph_path);
  if (given.num_nodes() != p) {
    throw InputError("cli", "graph has " + std::to_string(given.num_nodes()) +
                                " nodes but the data has " +
                                std::to_string(p) + " columns");
  }

  const double lp_given = predictive_log_likelihood(train.stats, test.stats,
                                                    given, options.jitter);
  const double lp_empty = predictive_log_likelihood(
      train.stats, test.stats, DecomposableGraph::empty_graph(p),
      options.jitter);
  const double lp_complete = predictive_log_likelihood(
      train.stats, test.stats, DecomposableGraph::complete_graph(p),
      options.jitter);

  ensure_out_dir(options.out_dir);
  json out;
  out["given"] = lp_given;
  out["empty"] = lp_empty;
  out["complete"] = lp_complete;
  out["graph_edges"] = given.num_edges();
  out["p"] = p;
  write_text_file(options.out_dir / "predictive.json", out.dump(2) + "\n");

  json meta = prepared_meta(train, options.preprocess);
  meta["command"] = "predict";
  meta["train"] = paths_to_json(options.train);
  meta["test"] = paths_to_json(options.test);
  meta["test_T"] = test.panel_T;
  meta["test_N"] = test.panel_N;
  meta["graph"] = options.graph_path.string();
  meta["jitter"] = options.jitter;
  meta["out"] = options.out_dir.string();
  write_text_file(options.out_dir / "run_meta.json", meta.dump(2) + "\n");
}

void cmd_spectra(const SpectraOptions& options) {
  PreparedStats prepared = prepare_stats(options.data, options.preprocess,
                                         options.smoothing,
                                         SmoothingDefault::DaniellRule);
  const int p = prepared.stats.dim;
  const std::vector<std::pair<int, int>> pairs = parse_pairs(options.pairs, p);

  ensure_out_dir(options.out_dir);
  std::ostringstream out;
  out << "freq,i,j,re,im\n";
  for (const auto& entry : prepared.stats.entries) {
    const double freq = 0.5 * (entry.freq_lo + entry.freq_hi) /
                        static_cast<double>(prepared.stats.series_length);
    for (const auto& [i, j] : pairs) {
      const std::complex<double> value = entry.stat(i, j) / entry.dof;
      out << fmt17(freq) << ',' << i << ',' << j << ',' << fmt17(value.real())
          << ',' << fmt17(value.imag()) << '\n';
    }
  }
  write_text_file(options.out_dir / "spectra.csv", out.str());

  json meta = prepared_meta(prepared, options.preprocess);
  meta["command"] = "spectra";
  meta["data"] = paths_to_json(options.data);
  meta["pairs"] = options.pairs;
  meta["out"] = options.out_dir.string();
  write_text_file(options.out_dir / "run_meta.json", meta.dump(2) + "\n");
}

DecomposableGraph load_graph_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError("cli", path.string() + ": bad graph JSON: " + e.what());
  }
  if (parsed.is_object() && parsed.contains("graph")) {
    return graph_from_json(parsed["graph"].dump());
  }
  return graph_from_json(text);
}

}  // namespace specgraph
