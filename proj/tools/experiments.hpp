#pragma once

// Experiment driver behind the CLI: every subcommand maps 1:1 onto library
// operations, emits a JSON report (parameters, seed, aggregated results,
// embedded checks, wall time) and, on request, a plot-ready CSV table. The
// driver holds no modeling logic of its own.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace kingman::experiments {

struct ExperimentConfig {
  std::string experiment;
  std::vector<int> n_values{1000};  // --n, repeatable for scaling tables
  double d = 1.0;
  int replicates = 1000;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  double horizon = 0.0;  // 0 = choose from d (kernel tail below 1e-6)
  int K = 30;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string out_path;
  std::string format = "json";  // json | csv
};

const std::vector<std::string>& experiment_names();

// Runs one experiment and returns the report document.
nlohmann::ordered_json run_experiment(const ExperimentConfig& config);

// CSV rendering of the report's table (stable column schema per experiment).
std::string report_to_csv(const nlohmann::ordered_json& report);

// True iff every embedded check in the report passed.
bool all_tests_passed(const nlohmann::ordered_json& report);

}  // namespace kingman::experiments
