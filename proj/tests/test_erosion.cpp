#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "kingman/erosion.hpp"
#include "kingman/rng.hpp"
#include "kingman/stats.hpp"

using kingman::EmpiricalPmf;
using kingman::Partition;
namespace erosion = kingman::erosion;

namespace {

Partition P(std::vector<std::vector<int>> blocks) {
  return Partition(std::move(blocks));
}

std::map<Partition, long> state_codes(int n) {
  std::map<Partition, long> code;
  long next = 0;
  for (const auto& p : erosion::enumerate_partitions(n)) code[p] = next++;
  return code;
}

}  // namespace

TEST_CASE("total event rate") {
  CHECK(erosion::total_event_rate(P({{1}, {2}}), 1.0) == 1.0);
  CHECK(erosion::total_event_rate(P({{1, 2}}), 1.0) == 2.0);
  CHECK(erosion::total_event_rate(P({{1, 2}, {3}}), 0.5) == 2.0);
  CHECK(erosion::total_event_rate(P({{1}}), 1.0) == 0.0);
}

TEST_CASE("step on forced states") {
  auto rng = kingman::split_rng(11, "erosion-step", 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(erosion::step(P({{1}, {2}}), 1.0, rng).second == P({{1, 2}}));
    CHECK(erosion::step(P({{1, 2}}), 1.0, rng).second == P({{1}, {2}}));
  }
  CHECK_THROWS_AS(erosion::step(P({{1}}), 1.0, rng), std::invalid_argument);
}

TEST_CASE("step event probabilities from a 2+1 state") {
  // From {{1,2},{3}} with d = 1 the merge and the two erosions fire at rate
  // 1 each; both erosions land in the all-singleton state.
  auto rng = kingman::split_rng(11, "erosion-step-probs", 0);
  const Partition start = P({{1, 2}, {3}});
  int merged = 0;
  const int reps = 30000;
  for (int i = 0; i < reps; ++i) {
    const auto [h, next] = erosion::step(start, 1.0, rng);
    if (next == P({{1, 2, 3}}))
      ++merged;
    else
      REQUIRE(next == P({{1}, {2}, {3}}));
  }
  CHECK(merged / static_cast<double>(reps) ==
        Catch::Approx(1.0 / 3.0).margin(0.01));
}

TEST_CASE("holding times are exponential at the total rate") {
  auto rng = kingman::split_rng(11, "erosion-holding", 0);
  const Partition start = P({{1, 2}, {3}});  // total rate 2 at d = 0.5
  double sum = 0.0;
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) sum += erosion::step(start, 0.5, rng).first;
  CHECK(sum / reps == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("simulate: n = 1 is a constant path") {
  auto rng = kingman::split_rng(11, "erosion-n1", 0);
  const auto path = erosion::simulate({1, 1.0}, Partition::singletons(1), 5.0, rng);
  REQUIRE(path.times.size() == 1);
  CHECK(path.states.front() == P({{1}}));
}

TEST_CASE("simulate path structure") {
  auto rng = kingman::split_rng(11, "erosion-path", 0);
  const auto path =
      erosion::simulate({4, 1.0}, Partition::singletons(4), 50.0, rng);
  REQUIRE(path.times.size() == path.states.size());
  REQUIRE(path.times.front() == 0.0);
  for (std::size_t i = 1; i < path.times.size(); ++i) {
    REQUIRE(path.times[i] > path.times[i - 1]);
    REQUIRE(path.times[i] <= path.t_end);
    const auto& prev = path.states[i - 1];
    const auto& cur = path.states[i];
    REQUIRE(cur.ground() == prev.ground());
    // Consecutive states differ by exactly one merge or one erosion.
    bool reachable = false;
    if (cur.block_count() + 1 == prev.block_count()) {
      for (std::size_t a = 0; a < prev.block_count() && !reachable; ++a)
        for (std::size_t b = a + 1; b < prev.block_count() && !reachable; ++b)
          reachable = merge(prev, a, b) == cur;
    } else if (cur.block_count() == prev.block_count() + 1) {
      for (int x : prev.ground())
        if (erode(prev, x) == cur) {
          reachable = true;
          break;
        }
    }
    REQUIRE(reachable);
  }
}

TEST_CASE("simulate long-run occupancy: two-state chain") {
  // n = 2, d = 1/2: P(one block) = 1/(1+2d) = 1/2.
  auto rng = kingman::split_rng(11, "erosion-occupancy2", 0);
  Partition state = Partition::singletons(2);
  double together = 0.0, total = 0.0;
  for (int chunk = 0; chunk < 10; ++chunk) {
    const auto path = erosion::simulate({2, 0.5}, state, 1000.0, rng);
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      const double until =
          i + 1 < path.times.size() ? path.times[i + 1] : path.t_end;
      if (path.states[i].block_count() == 1) together += until - path.times[i];
    }
    total += path.t_end;
    state = path.states.back();
  }
  CHECK(together / total == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("simulate long-run occupancy matches the generator oracle at n = 3") {
  const erosion::Params params{3, 1.0};
  const auto oracle = erosion::stationary_pmf_small_n(params);
  const auto code = state_codes(3);

  auto rng = kingman::split_rng(11, "erosion-occupancy3", 0);
  Partition state = Partition::singletons(3);
  std::map<long, double> occupancy;
  double total = 0.0;
  for (int chunk = 0; chunk < 100; ++chunk) {
    const auto path = erosion::simulate(params, state, 1000.0, rng);
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      const double until =
          i + 1 < path.times.size() ? path.times[i + 1] : path.t_end;
      occupancy[code.at(path.states[i])] += until - path.times[i];
    }
    total += path.t_end;
    state = path.states.back();
  }
  for (auto& [k, v] : occupancy) v /= total;
  std::map<long, double> expected;
  for (const auto& [p, prob] : oracle) expected[code.at(p)] = prob;
  CHECK(kingman::tv_distance(occupancy, expected) < 0.02);
}

TEST_CASE("oracle closed forms at n = 1 and n = 2") {
  const auto pmf1 = erosion::stationary_pmf_small_n({1, 1.0});
  REQUIRE(pmf1.size() == 1);
  CHECK(pmf1.at(P({{1}})) == Catch::Approx(1.0));

  for (double d : {0.5, 1.0, 2.0}) {
    const auto pmf = erosion::stationary_pmf_small_n({2, d});
    CHECK(pmf.at(P({{1, 2}})) == Catch::Approx(1.0 / (1.0 + 2.0 * d)).epsilon(1e-10));
    CHECK(pmf.at(P({{1}, {2}})) ==
          Catch::Approx(2.0 * d / (1.0 + 2.0 * d)).epsilon(1e-10));
  }

  // Hand-solved balance at n = 3, d = 1: singletons 1/3, the rest 1/6 each.
  const auto pmf3 = erosion::stationary_pmf_small_n({3, 1.0});
  CHECK(pmf3.at(P({{1}, {2}, {3}})) == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(pmf3.at(P({{1, 2, 3}})) == Catch::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(pmf3.at(P({{1, 3}, {2}})) == Catch::Approx(1.0 / 6.0).epsilon(1e-10));

  CHECK_THROWS_AS(erosion::stationary_pmf_small_n({9, 1.0}), std::invalid_argument);
}

TEST_CASE("oracle pmf sums to one") {
  for (int n : {4, 5}) {
    const auto pmf = erosion::stationary_pmf_small_n({n, 0.7});
    double sum = 0.0;
    for (const auto& [p, prob] : pmf) {
      REQUIRE(prob > 0.0);
      sum += prob;
    }
    CHECK(sum == Catch::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("stationary sampler trivial cases") {
  auto rng = kingman::split_rng(11, "erosion-stat-trivial", 0);
  for (int i = 0; i < 20; ++i)
    CHECK(erosion::sample_stationary({1, 2.0}, rng) == P({{1}}));

  int together = 0;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i)
    together += erosion::sample_stationary({2, 0.5}, rng).block_count() == 1;
  CHECK(together / static_cast<double>(reps) == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("stationary sampler matches the oracle across n and d") {
  for (int n : {2, 3, 4, 5}) {
    for (double d : {0.5, 1.0, 2.0}) {
      const erosion::Params params{n, d};
      const auto oracle = erosion::stationary_pmf_small_n(params);
      const auto code = state_codes(n);
      std::map<long, double> expected;
      for (const auto& [p, prob] : oracle) expected[code.at(p)] = prob;

      auto rng = kingman::split_rng(11, "erosion-stat-oracle",
                                    static_cast<std::uint64_t>(n * 100 + d * 10));
      EmpiricalPmf emp;
      for (int i = 0; i < 30000; ++i)
        emp.add(code.at(erosion::sample_stationary(params, rng)));
      const auto r = kingman::chi_square_gof(emp, expected);
      INFO("n=" << n << " d=" << d << " p=" << r.p_value);
      CHECK(r.p_value > 0.001);
    }
  }
}

TEST_CASE("stationary sampler is exchangeable") {
  // Size of the block containing 1 vs containing 2, independent batches.
  auto rng = kingman::split_rng(11, "erosion-exchangeable", 0);
  EmpiricalPmf of1, of2;
  for (int i = 0; i < 60000; ++i) {
    of1.add(static_cast<long>(
        erosion::sample_stationary({5, 1.0}, rng).block_size_of(1)));
    of2.add(static_cast<long>(
        erosion::sample_stationary({5, 1.0}, rng).block_size_of(2)));
  }
  CHECK(kingman::chi_square_two_sample(of1, of2).p_value > 0.01);
}

TEST_CASE("stationary sampler is sampling-consistent") {
  // restrict(sample(n+1), n) has the law of sample(n); tested at n = 3.
  const auto code = state_codes(3);
  auto rng = kingman::split_rng(11, "erosion-consistency", 0);
  EmpiricalPmf restricted, direct;
  for (int i = 0; i < 100000; ++i) {
    restricted.add(
        code.at(restrict_to(erosion::sample_stationary({4, 1.0}, rng), 3)));
    direct.add(code.at(erosion::sample_stationary({3, 1.0}, rng)));
  }
  CHECK(kingman::chi_square_two_sample(restricted, direct).p_value > 0.01);
}
