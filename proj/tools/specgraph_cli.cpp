#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specgraph/errors.hpp"
#include "specgraph/pipeline.hpp"

namespace {

int exit_code_for(const specgraph::Error& error) {
  switch (error.kind()) {
    case specgraph::ErrorKind::Input:
      return 2;
    case specgraph::ErrorKind::Numerical:
      return 3;
    case specgraph::ErrorKind::Config:
      return 4;
  }
  return 1;
}

std::vector<std::filesystem::path> to_paths(
    const std::vector<std::string>& strings) {
  return {strings.begin(), strings.end()};
}

void add_preprocess_flags(CLI::App* cmd, specgraph::PreprocessOptions* pre,
                          bool* no_center) {
  cmd->add_flag("--log-returns", pre->log_returns,
                "Transform prices to 100*log(p_t/p_{t-1}) before analysis");
  cmd->add_flag("--no-center", *no_center,
                "Skip mean removal (requires --keep-dc-unsafe)");
  cmd->add_flag("--keep-dc-unsafe", pre->keep_dc_unsafe,
                "Keep the k=0 coefficient when centering is disabled");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Graphical model learning for stationary multivariate time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "specgraph 0.1.0");

  // ---- learn ----------------------------------------------------------
  specgraph::LearnOptions learn;
  std::vector<std::string> learn_data;
  std::string learn_out;
  std::string learn_smoothing;
  double learn_g = 0.0;
  bool learn_no_center = false;
  CLI::App* learn_cmd =
      app.add_subcommand("learn", "Learn a decomposable graph from CSV data");
  learn_cmd->add_option("--data", learn_data, "Input CSVs, one per replicate")
      ->required();
  learn_cmd->add_option("--out", learn_out, "Output directory")->required();
  learn_cmd->add_option("--seed", learn.seed, "RNG seed");
  learn_cmd->add_option("--iterations", learn.iterations,
                        "Search iterations (default 10000)");
  CLI::Option* learn_g_opt = learn_cmd->add_option(
      "--g", learn_g, "Fractional prior parameter in (0,1); default 4/dof");
  CLI::Option* learn_smoothing_opt = learn_cmd->add_option(
      "--smoothing", learn_smoothing,
      "none | daniell:m | bartlett:M | piecewise:M (default: piecewise for "
      "N=1, none otherwise)");
  learn_cmd->add_option("--prior-a", learn.prior_a, "Edge prior Beta a");
  learn_cmd->add_option("--prior-b", learn.prior_b, "Edge prior Beta b");
  learn_cmd->add_option("--restarts", learn.restarts,
                        "Independent restarts merged by best score");
  learn_cmd->add_option("--global-move-period", learn.global_move_period,
                        "Global move every k-th step (default 50)");
  learn_cmd->add_option("--resample-period", learn.resample_period,
                        "Resampling move every k-th step (default 100)");
  learn_cmd->add_option("--edge-prob-smoothing", learn.edge_prob_smoothing,
                        "Pseudo-count mass for edge probabilities");
  add_preprocess_flags(learn_cmd, &learn.preprocess, &learn_no_center);

  // ---- simulate -------------------------------------------------------
  specgraph::SimulateOptions simulate;
  std::string simulate_out;
  bool allow_nondecomposable = false;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Generate VAR(1) benchmark panels");
  simulate_cmd->add_option("--p", simulate.sim.p, "Dimension")->required();
  simulate_cmd->add_option("--T", simulate.sim.T, "Series length")->required();
  simulate_cmd->add_option("--N", simulate.sim.N, "Replicates (default 1)");
  simulate_cmd->add_option("--rho", simulate.sim.rho,
                           "Off-diagonal Bernoulli rate (default 0.2)");
  simulate_cmd->add_option("--diag", simulate.sim.diag_value,
                           "Diagonal coefficient (default 0.5)");
  simulate_cmd->add_option("--offdiag", simulate.sim.offdiag_value,
                           "Off-diagonal coefficient value (default 0.5)");
  simulate_cmd->add_option("--seed", simulate.sim.seed, "RNG seed");
  simulate_cmd->add_option("--burn-in", simulate.burn_in,
                           "Discarded initial samples (default 500)");
  simulate_cmd->add_flag("--allow-nondecomposable", allow_nondecomposable,
                         "Do not reject models with nondecomposable graphs");
  simulate_cmd->add_option("--out", simulate_out, "Output directory")
      ->required();

  // ---- evaluate -------------------------------------------------------
  specgraph::EvaluateOptions evaluate;
  std::string evaluate_graph;
  std::string evaluate_model;
  std::string evaluate_out;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "Recovery metrics of an estimated graph vs a model");
  evaluate_cmd->add_option("--graph", evaluate_graph, "Estimated graph JSON")
      ->required();
  evaluate_cmd->add_option("--model", evaluate_model, "model.json with truth")
      ->required();
  evaluate_cmd->add_option("--out", evaluate_out, "Output directory")
      ->required();

  // ---- predict --------------------------------------------------------
  specgraph::PredictOptions predict;
  std::vector<std::string> predict_train;
  std::vector<std::string> predict_test;
  std::string predict_graph;
  std::string predict_out;
  std::string predict_smoothing;
  bool predict_no_center = false;
  CLI::App* predict_cmd = app.add_subcommand(
      "predict", "Held-out predictive score under given/empty/complete graphs");
  predict_cmd->add_option("--train", predict_train, "Training CSVs")
      ->required();
  predict_cmd->add_option("--test", predict_test, "Held-out CSVs")->required();
  predict_cmd->add_option("--graph", predict_graph, "Graph JSON to test")
      ->required();
  predict_cmd->add_option("--out", predict_out, "Output directory")
      ->required();
  CLI::Option* predict_smoothing_opt = predict_cmd->add_option(
      "--smoothing", predict_smoothing,
      "Smoothing for train and test stats (default daniell)");
  predict_cmd->add_option("--jitter", predict.jitter,
                          "Cholesky jitter (default 1e-8)");
  add_preprocess_flags(predict_cmd, &predict.preprocess, &predict_no_center);

  // ---- spectra --------------------------------------------------------
  specgraph::SpectraOptions spectra;
  std::vector<std::string> spectra_data;
  std::string spectra_out;
  std::string spectra_smoothing;
  bool spectra_no_center = false;
  CLI::App* spectra_cmd = app.add_subcommand(
      "spectra", "Smoothed spectral estimates as tidy CSV");
  spectra_cmd->add_option("--data", spectra_data, "Input CSVs")->required();
  spectra_cmd->add_option("--out", spectra_out, "Output directory")
      ->required();
  CLI::Option* spectra_smoothing_opt = spectra_cmd->add_option(
      "--smoothing", spectra_smoothing, "Smoothing mode (default daniell)");
  spectra_cmd->add_option(
      "--pairs", spectra.pairs,
      "auto (diagonal), all, none, or an explicit list like 0-1,2-3");
  add_preprocess_flags(spectra_cmd, &spectra.preprocess, &spectra_no_center);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (learn_cmd->parsed()) {
      learn.data = to_paths(learn_data);
      learn.out_dir = learn_out;
      learn.preprocess.center = !learn_no_center;
      if (*learn_g_opt) learn.g = learn_g;
      if (*learn_smoothing_opt) {
        learn.smoothing = specgraph::SmoothingSpec::parse(learn_smoothing);
      }
      specgraph::cmd_learn(learn);
    } else if (simulate_cmd->parsed()) {
      simulate.sim.require_decomposable = !allow_nondecomposable;
      simulate.out_dir = simulate_out;
      specgraph::cmd_simulate(simulate);
    } else if (evaluate_cmd->parsed()) {
      evaluate.graph_path = evaluate_graph;
      evaluate.model_path = evaluate_model;
      evaluate.out_dir = evaluate_out;
      specgraph::cmd_evaluate(evaluate);
    } else if (predict_cmd->parsed()) {
      predict.train = to_paths(predict_train);
      predict.test = to_paths(predict_test);
      predict.graph_path = predict_graph;
      predict.out_dir = predict_out;
      predict.preprocess.center = !predict_no_center;
      if (*predict_smoothing_opt) {
        predict.smoothing =
            specgraph::SmoothingSpec::parse(predict_smoothing);
      }
      specgraph::cmd_predict(predict);
    } else if (spectra_cmd->parsed()) {
      spectra.data = to_paths(spectra_data);
      spectra.out_dir = spectra_out;
      spectra.preprocess.center = !spectra_no_center;
      if (*spectra_smoothing_opt) {
        spectra.smoothing =
            specgraph::SmoothingSpec::parse(spectra_smoothing);
      }
      specgraph::cmd_spectra(spectra);
    }
  } catch (const specgraph::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
