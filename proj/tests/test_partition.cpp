#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "kingman/erosion.hpp"
#include "kingman/partition.hpp"
#include "kingman/rng.hpp"
#include "kingman/stats.hpp"

using kingman::MassPartition;
using kingman::Partition;

namespace {

Partition P(std::vector<std::vector<int>> blocks) {
  return Partition(std::move(blocks));
}

// Random partition of [n] via a uniform restricted-growth string.
Partition random_partition(int n, kingman::Rng& rng) {
  std::vector<std::vector<int>> blocks;
  for (int i = 1; i <= n; ++i) {
    const auto choice = rng.below(blocks.size() + 1);
    if (choice == blocks.size())
      blocks.push_back({i});
    else
      blocks[choice].push_back(i);
  }
  return Partition(std::move(blocks));
}

}  // namespace

TEST_CASE("merge basic examples") {
  CHECK(merge(P({{1}, {2}}), 0, 1) == P({{1, 2}}));
  CHECK(merge(P({{1, 3}, {2}}), 0, 1) == P({{1, 2, 3}}));
  CHECK_THROWS_AS(merge(P({{1, 2}}), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(merge(P({{1}, {2}}), 0, 2), std::out_of_range);
}

TEST_CASE("erode basic examples") {
  CHECK(erode(P({{1, 2}}), 1) == P({{1}, {2}}));
  CHECK(erode(P({{1}, {2}}), 1) == P({{1}, {2}}));  // singleton no-op
  CHECK(erode(P({{1, 2, 3}}), 2) == P({{1, 3}, {2}}));
  CHECK_THROWS_AS(erode(P({{1, 2}}), 5), std::out_of_range);
}

TEST_CASE("restrict basic examples") {
  CHECK(restrict_to(P({{1, 3}, {2}}), 2) == P({{1}, {2}}));
  CHECK(restrict_to(P({{1, 2, 3}}), 3) == P({{1, 2, 3}}));
  CHECK(restrict_to(P({{1}, {2, 3}}), 1) == P({{1}}));
  CHECK_THROWS_AS(restrict_to(P({{1, 2}}), 0), std::out_of_range);
  CHECK_THROWS_AS(restrict_to(P({{1, 2}}), 3), std::out_of_range);
}

TEST_CASE("partition structural properties on random inputs") {
  auto rng = kingman::split_rng(2024, "partition-props", 0);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(8));
    const Partition p = random_partition(n, rng);

    // erode is idempotent
    const int x = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    CHECK(erode(erode(p, x), x) == erode(p, x));

    // merge drops exactly one block and preserves the ground set
    if (p.block_count() >= 2) {
      const auto i = rng.below(p.block_count());
      auto j = rng.below(p.block_count() - 1);
      if (j >= i) ++j;
      const Partition m = merge(p, i, j);
      CHECK(m.block_count() == p.block_count() - 1);
      CHECK(m.ground() == p.ground());
    }

    // restriction tower
    const int m_hi = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int m_lo = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m_hi)));
    CHECK(restrict_to(restrict_to(p, m_hi), m_lo) == restrict_to(p, m_lo));
  }
}

TEST_CASE("paintbox degenerate mass partitions") {
  auto rng = kingman::split_rng(2024, "paintbox-degenerate", 0);
  for (int rep = 0; rep < 50; ++rep) {
    CHECK(paintbox(MassPartition({1.0}), 4, rng) == Partition::one_block(4));
    CHECK(paintbox(MassPartition(std::vector<double>{}), 3, rng) ==
          Partition::singletons(3));
  }
}

TEST_CASE("paintbox half-half block sizes are binomial") {
  auto rng = kingman::split_rng(2024, "paintbox-halfhalf", 0);
  const MassPartition mp({0.5, 0.5});
  for (int rep = 0; rep < 5; ++rep) {
    const Partition p = paintbox(mp, 100000, rng);
    REQUIRE(p.block_count() == 2);
    for (const auto& b : p.blocks()) {
      CHECK(b.size() > 49000);
      CHECK(b.size() < 51000);
    }
  }
}

TEST_CASE("paintbox law is invariant under relabeling") {
  auto rng = kingman::split_rng(2024, "paintbox-exchangeable", 0);
  const MassPartition mp({0.4, 0.25, 0.1});
  const int n = 6;
  const std::vector<int> perm{4, 6, 2, 5, 1, 3};

  const auto states = kingman::erosion::enumerate_partitions(3);
  std::map<Partition, long> code;
  for (std::size_t s = 0; s < states.size(); ++s)
    code[states[s]] = static_cast<long>(s);

  kingman::EmpiricalPmf plain, permuted;
  for (int rep = 0; rep < 100000; ++rep) {
    plain.add(code.at(restrict_to(paintbox(mp, n, rng), 3)));
    permuted.add(code.at(restrict_to(relabel(paintbox(mp, n, rng), perm), 3)));
  }
  const auto r = kingman::chi_square_two_sample(plain, permuted);
  CHECK(r.p_value > 0.01);
}

TEST_CASE("empirical frequencies") {
  CHECK(empirical_frequencies(P({{1, 2, 3}, {4}})).weights() ==
        std::vector<double>{0.75, 0.25});
  CHECK(empirical_frequencies(P({{1}})).weights() == std::vector<double>{1.0});
  CHECK(empirical_frequencies(P({{1}, {2}})).weights() ==
        std::vector<double>{0.5, 0.5});

  auto rng = kingman::split_rng(2024, "empirical-freq", 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const Partition p = random_partition(n, rng);
    const auto mp = empirical_frequencies(p);
    // Integer block sizes sum to n exactly; the float sum is then 1 up to
    // one rounding per block.
    std::size_t total = 0;
    for (const auto& b : p.blocks()) total += b.size();
    REQUIRE(total == static_cast<std::size_t>(n));
    CHECK(std::abs(mp.total_mass() - 1.0) < 1e-12);
  }
}

TEST_CASE("mass partition validation") {
  CHECK_THROWS_AS(MassPartition({0.2, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MassPartition({0.8, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(MassPartition({-0.1}), std::invalid_argument);
  CHECK(MassPartition({0.6, 0.4}).dust_mass() == 0.0);
}

TEST_CASE("partition json round trip") {
  const Partition p = P({{1, 3}, {2}, {4, 5, 6}});
  CHECK(kingman::to_json_string(p) == "[[1,3],[2],[4,5,6]]");
  CHECK(kingman::partition_from_json(kingman::to_json_string(p)) == p);
  CHECK(kingman::partition_from_json("[[2, 1], [3]]") == P({{1, 2}, {3}}));
  CHECK_THROWS_AS(kingman::partition_from_json("[[1,1]]"), std::invalid_argument);
  CHECK_THROWS_AS(kingman::partition_from_json("[[1],"), std::invalid_argument);

  auto rng = kingman::split_rng(2024, "json-roundtrip", 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const Partition q = random_partition(1 + static_cast<int>(rng.below(10)), rng);
    CHECK(kingman::partition_from_json(kingman::to_json_string(q)) == q);
  }
}
