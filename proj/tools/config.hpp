#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gca::cli {

// Experiment description: `key: value` lines, '#' comments. Every
// experiment input lives in the file so runs are reproducible; the only
// overrides are the documented command-line flags.
struct ExperimentConfig {
  std::string model_path;
  std::vector<std::pair<double, double>> kappa_nodes;
  std::vector<std::string> quasi_orbit;
  std::vector<double> eps_ladder;
  std::vector<int> truncation_ladder;
  double t_begin = 0.0;
  double t_end = 100.0;
  double t_step = 0.5;
  int probes = 20;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  int symbol_grid = 4096;
};

// Throws E_CONFIG naming the offending field and line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace gca::cli
