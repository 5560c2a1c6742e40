// Command-line driver: one subcommand-style experiment per run, selected by
// the positional argument. Reports are deterministic for a fixed seed apart
// from the wall_time_s field.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  namespace experiments = kingman::experiments;
  experiments::ExperimentConfig config;

  CLI::App app{
      "Simulation and statistical-verification toolkit for coalescents with "
      "erosion and immigration"};
  std::string name_list;
  for (const auto& n : experiments::experiment_names())
    name_list += (name_list.empty() ? "" : ", ") + n;

  app.add_option("experiment", config.experiment,
                 "Experiment to run: " + name_list)
      ->required();
  config.n_values.clear();
  app.add_option("--n", config.n_values,
                 "Label count / scale parameter (repeatable for scaling tables)");
  app.add_option("--d", config.d, "Erosion / immigration rate")
      ->check(CLI::PositiveNumber);
  app.add_option("--replicates", config.replicates, "Monte Carlo replicates")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Master seed");
  app.add_option("--dt", config.dt, "Euler step for diffusion experiments")
      ->check(CLI::PositiveNumber);
  app.add_option("--horizon", config.horizon,
                 "Time horizon (diffusions) or window (occupancy runs); "
                 "0 picks a default from d");
  app.add_option("--K", config.K, "Hierarchy depth for diffusion experiments")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", config.threads,
                 "Worker threads (0 = hardware concurrency)");
  app.add_option("--out", config.out_path, "Write the JSON report here");
  app.add_option("--format", config.format, "json | csv (csv adds <out>.csv)")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);
  if (config.n_values.empty()) config.n_values = {1000};

  try {
    const auto report = experiments::run_experiment(config);
    const std::string text = report.dump(2);
    if (config.out_path.empty()) {
      std::cout << text << '\n';
    } else {
      std::ofstream out(config.out_path);
      if (!out) {
        std::cerr << "error: cannot write " << config.out_path << '\n';
        return 2;
      }
      out << text << '\n';
    }
    if (config.format == "csv") {
      const std::string csv = experiments::report_to_csv(report);
      if (config.out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(config.out_path + ".csv");
        if (!out) {
          std::cerr << "error: cannot write " << config.out_path << ".csv\n";
          return 2;
        }
        out << csv;
      }
    }
    if (!experiments::all_tests_passed(report)) {
      std::cerr << "embedded checks failed\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
