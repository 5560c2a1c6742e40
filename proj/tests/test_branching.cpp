#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "kingman/branching.hpp"
#include "kingman/rng.hpp"
#include "kingman/stats.hpp"

namespace branching = kingman::branching;

namespace {

// Independent route to binom(2(k-1), k-1) / (k 2^{2k-1}): Pascal's triangle
// in exact integers, then an exact power-of-two division.
double pmf_via_pascal(int k) {
  const int n = 2 * (k - 1);
  std::vector<unsigned __int128> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  const unsigned __int128 binom = row[static_cast<std::size_t>(k - 1)];
  return std::ldexp(static_cast<double>(binom) / k, -(2 * k - 1));
}

}  // namespace

TEST_CASE("total progeny pmf small values") {
  CHECK(branching::total_progeny_pmf(1) == 0.5);
  CHECK(branching::total_progeny_pmf(2) == 0.125);
  CHECK(branching::total_progeny_pmf(3) == 0.0625);
  CHECK_THROWS_AS(branching::total_progeny_pmf(0), std::invalid_argument);
}

TEST_CASE("total progeny pmf equals the Catalan form exactly for k <= 30") {
  // Catalan(k-1) via the recurrence is exact in 64-bit for k <= 30 and the
  // division by 2^{2k-1} is exact in binary floating point.
  std::uint64_t cat = 1;
  for (int k = 1; k <= 30; ++k) {
    if (k > 1) {
      const int m = k - 1;
      cat = cat * static_cast<std::uint64_t>(2 * (2 * m - 1)) /
            static_cast<std::uint64_t>(m + 1);
    }
    CHECK(branching::total_progeny_pmf(static_cast<std::uint64_t>(k)) ==
          std::ldexp(static_cast<double>(cat), -(2 * k - 1)));
    CHECK(branching::total_progeny_pmf(static_cast<std::uint64_t>(k)) ==
          pmf_via_pascal(k));
  }
}

TEST_CASE("total progeny pmf crosses the big-integer / log-gamma boundary smoothly") {
  for (std::uint64_t k : {63ULL, 64ULL, 65ULL, 66ULL, 200ULL}) {
    const double kk = static_cast<double>(k);
    const double ref = std::exp(std::lgamma(2 * kk - 1) - 2 * std::lgamma(kk) -
                                std::log(kk) - (2 * kk - 1) * std::log(2.0));
    CHECK(branching::total_progeny_pmf(k) == Catch::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("total progeny pmf partial sums approach 1 monotonically") {
  double sum = 0.0;
  double prev = 0.0;
  for (std::uint64_t k = 1; k <= 10000; ++k) {
    sum += branching::total_progeny_pmf(k);
    REQUIRE(sum >= prev);
    REQUIRE(sum <= 1.0 + 1e-12);
    prev = sum;
  }
  CHECK(1.0 - sum < 1e-2);  // tail ~ k^{-1/2}
}

TEST_CASE("simulated progeny matches the pmf") {
  auto rng = kingman::split_rng(314, "progeny-sim", 0);
  const std::uint64_t reps = 1000000;
  std::uint64_t excluded = 0;
  kingman::EmpiricalPmf emp;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const auto out = branching::simulate_total_progeny(1.0, 10000000, rng);
    if (!out) {
      ++excluded;
      continue;
    }
    REQUIRE(out->progeny >= 1);
    REQUIRE(out->extinction_time > 0.0);
    emp.add(std::min<long>(static_cast<long>(out->progeny), 13));
  }
  CHECK(static_cast<double>(excluded) / reps < 0.01);

  std::map<long, double> expected;
  double head = 0.0;
  for (long k = 1; k <= 12; ++k) {
    expected[k] = branching::total_progeny_pmf(static_cast<std::uint64_t>(k));
    head += expected[k];
  }
  expected[13] = 1.0 - head;  // tail cell
  const auto r = kingman::chi_square_gof(emp, expected);
  CHECK(r.p_value > 0.01);

  // P(J = 1) = 1/2: the first event is a death with probability 1/2.
  const double p1 = emp.frequency(1);
  CHECK(p1 == Catch::Approx(0.5).margin(0.003));
}

TEST_CASE("progeny law does not depend on the rate") {
  auto rng = kingman::split_rng(314, "progeny-rate", 0);
  kingman::EmpiricalPmf slow, fast;
  for (int i = 0; i < 150000; ++i) {
    const auto a = branching::simulate_total_progeny(0.5, 1000000, rng);
    const auto b = branching::simulate_total_progeny(2.0, 1000000, rng);
    if (a) slow.add(std::min<long>(static_cast<long>(a->progeny), 15));
    if (b) fast.add(std::min<long>(static_cast<long>(b->progeny), 15));
  }
  const auto r = kingman::chi_square_two_sample(slow, fast);
  CHECK(r.p_value > 0.01);

  // The rate does rescale time: quadrupling the rate quarters the mean
  // lifetime of progeny-1 excursions (lifetime Exp(2*rate) in that case).
  auto rng2 = kingman::split_rng(314, "progeny-rate-time", 0);
  double t_slow = 0.0, t_fast = 0.0;
  int n_slow = 0, n_fast = 0;
  for (int i = 0; i < 50000; ++i) {
    const auto a = branching::simulate_total_progeny(0.5, 1000000, rng2);
    const auto b = branching::simulate_total_progeny(2.0, 1000000, rng2);
    if (a && a->progeny == 1) { t_slow += a->extinction_time; ++n_slow; }
    if (b && b->progeny == 1) { t_fast += b->extinction_time; ++n_fast; }
  }
  CHECK(t_slow / n_slow == Catch::Approx(1.0).margin(0.02));
  CHECK(t_fast / n_fast == Catch::Approx(0.25).margin(0.01));
}

TEST_CASE("tiny event budget reports exclusion") {
  auto rng = kingman::split_rng(314, "progeny-budget", 0);
  int excluded = 0;
  for (int i = 0; i < 2000; ++i)
    if (!branching::simulate_total_progeny(1.0, 3, rng)) ++excluded;
  CHECK(excluded > 0);  // excursions longer than 3 events are common
  CHECK_THROWS_AS(branching::simulate_total_progeny(0.0, 10, rng),
                  std::invalid_argument);
}
