#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "gca/error.hpp"
#include "inspect.hpp"
#include "orchestrator.hpp"

namespace {

// Documented exit codes: 0 success, 2 config, 3 model, 4 hypothesis,
// 5 separation, 1 anything else (including unmet eps targets).
int exit_code_for(const gca::Error& e) {
  switch (e.code()) {
    case gca::ErrorCode::config:
      return 2;
    case gca::ErrorCode::model_file:
      return 3;
    case gca::ErrorCode::hypothesis_fails:
      return 4;
    case gca::ErrorCode::no_separation:
      return 5;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupoid convolution algebras: boundary spectra and "
               "localization experiments"};
  app.require_subcommand(1);

  std::string config_path, model_path, out_override;
  std::uint64_t seed_override = 0;
  int threads_override = 0;
  bool has_seed = false;

  CLI::App* run = app.add_subcommand("run", "run the experiment in a config file");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--out", out_override, "output directory override");
  run->add_option("--seed", seed_override, "probe seed override")
      ->each([&](const std::string&) { has_seed = true; });
  run->add_option("--threads", threads_override,
                  "max concurrent truncation-ladder points");

  CLI::App* inspect = app.add_subcommand("inspect", "summarize a model or groupoid file");
  inspect->add_option("model", model_path, "model or groupoid file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      gca::cli::ExperimentConfig cfg = gca::cli::load_config(config_path);
      if (!out_override.empty()) cfg.out_dir = out_override;
      if (has_seed) cfg.seed = seed_override;
      if (threads_override > 0) cfg.threads = threads_override;
      const gca::cli::RunOutcome outcome = gca::cli::run_experiment(cfg);
      std::cout << outcome.summary;
      std::cout << "report: " << outcome.csv_path << "\n";
      std::cout << "series: " << outcome.series_path << "\n";
      return outcome.exit_code;
    }
    std::cout << gca::cli::inspect_file(model_path);
    return 0;
  } catch (const gca::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
