#pragma once

#include <string>

#include "config.hpp"

namespace gca::cli {

struct RunOutcome {
  int exit_code = 0;
  std::string csv_path;
  std::string series_path;
  std::string summary;  // human-readable log, one line per run
};

// Executes the full experiment described by the config: hypothesis gate,
// localization per (L, eps), propagation sweep, residual ladder. Writes the
// report CSV and the per-t series dump into the output directory; the CSV is
// byte-reproducible for a fixed config modulo the runtime_s column.
// Exit code 0 iff every requested eps target was met.
RunOutcome run_experiment(const ExperimentConfig& config);

}  // namespace gca::cli
