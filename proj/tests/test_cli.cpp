#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "experiments.hpp"

namespace experiments = kingman::experiments;
using experiments::ExperimentConfig;

TEST_CASE("reports are byte-identical for a fixed seed apart from wall time") {
  ExperimentConfig c;
  c.experiment = "oracle-check";
  c.n_values = {3};
  c.d = 1.0;
  c.replicates = 20000;
  c.seed = 7;
  c.threads = 2;
  auto a = experiments::run_experiment(c);
  auto b = experiments::run_experiment(c);
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("oracle-check embeds a passing chi-square at n = 3") {
  ExperimentConfig c;
  c.experiment = "oracle-check";
  c.n_values = {3};
  c.d = 1.0;
  c.replicates = 100000;
  c.seed = 1;
  const auto report = experiments::run_experiment(c);
  CHECK(report.at("results").at("chi_square_p_value").get<double>() > 0.01);
  CHECK(experiments::all_tests_passed(report));
  CHECK(report.at("experiment") == "oracle-check");
  CHECK(report.at("seed") == 1);
  CHECK(report.at("params").at("n") == 3);
}

TEST_CASE("block-size-dist at n = 1 only ever sees singletons") {
  ExperimentConfig c;
  c.experiment = "block-size-dist";
  c.n_values = {1};
  c.d = 1.0;
  c.replicates = 100;
  c.seed = 7;
  const auto report = experiments::run_experiment(c);
  const auto& table = report.at("results").at("table");
  REQUIRE(table.size() == 1);
  CHECK(table.front().at("k") == 1);
  CHECK(table.front().at("frequency") == 1.0);
  CHECK(experiments::all_tests_passed(report));  // no embedded test at n = 1
}

TEST_CASE("unknown experiment and invalid config are rejected") {
  ExperimentConfig c;
  c.experiment = "no-such-experiment";
  CHECK_THROWS_AS(experiments::run_experiment(c), std::invalid_argument);
  c.experiment = "oracle-check";
  c.n_values = {12};  // oracle limited to n <= 8
  CHECK_THROWS_AS(experiments::run_experiment(c), std::invalid_argument);
}

TEST_CASE("csv table has a stable schema") {
  ExperimentConfig c;
  c.experiment = "block-count-scaling";
  c.n_values = {100, 400};
  c.d = 1.0;
  c.replicates = 50;
  c.seed = 3;
  const auto report = experiments::run_experiment(c);
  const auto csv = experiments::report_to_csv(report);
  CHECK(csv.rfind("n,mean_over_sqrt_n,std_error,target\n", 0) == 0);
  // one header + one row per n
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("immigration-stationary embeds occupancy and balance checks") {
  ExperimentConfig c;
  c.experiment = "immigration-stationary";
  c.d = 1.0;
  c.horizon = 20000.0;
  c.seed = 9;
  const auto report = experiments::run_experiment(c);
  CHECK(experiments::all_tests_passed(report));
  CHECK(report.at("results").at("max_detailed_balance_deviation").get<double>() <=
        1e-12);
}
