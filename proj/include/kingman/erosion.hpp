#pragma once

// The n-Kingman coalescent with erosion: every pair of blocks merges at rate
// 1, every label in a non-singleton block is eroded to a fresh singleton at
// rate d. Provides a transient Gillespie simulator, an exact stationary
// sampler, and a brute-force generator oracle for small n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kingman/partition.hpp"
#include "kingman/rng.hpp"

namespace kingman::erosion {

struct Params {
  int n = 1;
  double d = 1.0;
};

inline void validate(const Params& p) {
  if (p.n < 1) throw std::invalid_argument("erosion::Params: n must be >= 1");
  if (!(p.d > 0.0)) throw std::invalid_argument("erosion::Params: d must be > 0");
}

// m(m-1)/2 + d * (#labels outside singleton blocks). Eroding a singleton is
// a null transition and is excluded from the rate.
inline double total_event_rate(const Partition& p, double d) {
  const double m = static_cast<double>(p.block_count());
  std::size_t erodible = 0;
  for (const auto& b : p.blocks())
    if (b.size() >= 2) erodible += b.size();
  return 0.5 * m * (m - 1.0) + d * static_cast<double>(erodible);
}

// One jump of the chain: exponential holding time at the total rate, then a
// uniform pair-merge or a uniform erosion chosen proportionally to rate.
inline std::pair<double, Partition> step(const Partition& p, double d, Rng& rng) {
  const double rate = total_event_rate(p, d);
  if (!(rate > 0.0))
    throw std::invalid_argument("erosion::step: absorbing state (n = 1)");
  const double holding = rng.exp_standard() / rate;

  const std::size_t m = p.block_count();
  const double merge_rate = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  if (rng.uniform() * rate < merge_rate) {
    // Uniform unordered pair of blocks.
    const std::uint64_t npairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
    std::uint64_t r = rng.below(npairs);
    std::size_t i = 0;
    while (r >= m - 1 - i) {
      r -= m - 1 - i;
      ++i;
    }
    const std::size_t j = i + 1 + static_cast<std::size_t>(r);
    return {holding, merge(p, i, j)};
  }

  std::size_t erodible = 0;
  for (const auto& b : p.blocks())
    if (b.size() >= 2) erodible += b.size();
  std::uint64_t r = rng.below(erodible);
  for (const auto& b : p.blocks()) {
    if (b.size() < 2) continue;
    if (r < b.size()) return {holding, erode(p, b[static_cast<std::size_t>(r)])};
    r -= b.size();
  }
  throw std::logic_error("erosion::step: unreachable");
}

struct PathSample {
  double t_end = 0.0;
  std::vector<double> times;      // jump times, first entry 0 (initial state)
  std::vector<Partition> states;  // state entered at the matching time
};

// Path on [0, t_end]; the last recorded state is the value at t_end.
inline PathSample simulate(const Params& params, const Partition& initial,
                           double t_end, Rng& rng) {
  validate(params);
  if (!(t_end > 0.0))
    throw std::invalid_argument("erosion::simulate: t_end must be > 0");
  if (initial.ground() != Partition::singletons(params.n).ground())
    throw std::invalid_argument("erosion::simulate: initial must partition [n]");
  PathSample path;
  path.t_end = t_end;
  path.times.push_back(0.0);
  path.states.push_back(initial);
  double t = 0.0;
  Partition state = initial;
  while (total_event_rate(state, params.d) > 0.0) {
    auto [holding, next] = step(state, params.d, rng);
    t += holding;
    if (t > t_end) break;
    path.times.push_back(t);
    path.states.push_back(next);
    state = std::move(next);
  }
  return path;
}

namespace detail {

// Union-find over labels 1..n with an explicit list of live roots, so that a
// uniform pair of current blocks can be drawn in O(1).
struct BlockForest {
  std::vector<int> parent;    // 0-based
  std::vector<int> roots;

  explicit BlockForest(int n) : parent(static_cast<std::size_t>(n), -1) {}

  void insert(int x) { roots.push_back(x); }

  // Merges the blocks at roots[i] and roots[j]; keeps roots compact.
  void merge_roots(std::size_t i, std::size_t j) {
    if (i == j) throw std::logic_error("BlockForest: i == j");
    const int a = roots[i], b = roots[j];
    parent[static_cast<std::size_t>(b)] = a;
    roots[j] = roots.back();
    roots.pop_back();
  }

  Partition to_partition(int n) {
    std::unordered_map<int, std::vector<int>> groups;
    groups.reserve(roots.size() * 2);
    for (int x = 0; x < n; ++x) {
      // Path compression on read.
      int r = x;
      while (parent[static_cast<std::size_t>(r)] >= 0)
        r = parent[static_cast<std::size_t>(r)];
      int c = x;
      while (parent[static_cast<std::size_t>(c)] >= 0) {
        const int next = parent[static_cast<std::size_t>(c)];
        parent[static_cast<std::size_t>(c)] = r;
        c = next;
      }
      groups[r].push_back(x + 1);
    }
    std::vector<std::vector<int>> blocks;
    blocks.reserve(groups.size());
    for (auto& [root, members] : groups) blocks.push_back(std::move(members));
    return Partition(std::move(blocks));
  }
};

}  // namespace detail

// Exact stationary sample. Each label's most recent erosion lies an
// independent Exp(d) in the past; playing the labels back in as singletons
// at those times, with every pair of live blocks coalescing at rate 1, and
// reading the partition at time 0 gives a stationary draw. No burn-in.
inline Partition sample_stationary(const Params& params, Rng& rng) {
  validate(params);
  const int n = params.n;
  std::vector<std::pair<double, int>> insertions(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    insertions[static_cast<std::size_t>(i)] = {-rng.exponential(params.d), i};
  std::sort(insertions.begin(), insertions.end());

  detail::BlockForest forest(n);
  double t = insertions.front().first;
  std::size_t next_insert = 0;
  while (true) {
    const double t_stop =
        next_insert < insertions.size() ? insertions[next_insert].first : 0.0;
    // Coalesce until the next insertion (or time 0).
    while (forest.roots.size() >= 2) {
      const double m = static_cast<double>(forest.roots.size());
      const double rate = 0.5 * m * (m - 1.0);
      const double holding = rng.exp_standard() / rate;
      if (t + holding >= t_stop) break;
      t += holding;
      const std::size_t i = static_cast<std::size_t>(rng.below(forest.roots.size()));
      std::size_t j = static_cast<std::size_t>(rng.below(forest.roots.size() - 1));
      if (j >= i) ++j;
      forest.merge_roots(i, j);
    }
    t = t_stop;
    if (next_insert == insertions.size()) break;
    forest.insert(insertions[next_insert].second);
    ++next_insert;
  }
  return forest.to_partition(n);
}

// All partitions of [n] in restricted-growth-string order.
inline std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_partitions: n must be >= 1");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  auto emit = [&] {
    const int nblocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(nblocks));
    for (int i = 0; i < n; ++i)
      blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])]
          .push_back(i + 1);
    out.emplace_back(std::move(blocks));
  };
  // Iterative restricted-growth enumeration.
  std::vector<int> maxval(static_cast<std::size_t>(n), 0);
  emit();
  while (true) {
    int i = n - 1;
    while (i > 0 && rgs[static_cast<std::size_t>(i)] ==
                        maxval[static_cast<std::size_t>(i - 1)] + 1)
      --i;
    if (i == 0) break;
    ++rgs[static_cast<std::size_t>(i)];
    maxval[static_cast<std::size_t>(i)] =
        std::max(maxval[static_cast<std::size_t>(i - 1)],
                 rgs[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      rgs[static_cast<std::size_t>(j)] = 0;
      maxval[static_cast<std::size_t>(j)] = maxval[static_cast<std::size_t>(i)];
    }
    emit();
  }
  return out;
}

// Brute-force oracle: builds the explicit generator over all partitions of
// [n] and solves pi Q = 0 by dense LU, with the normalization equation
// replacing the last balance equation. The result is checked against the
// full system before returning.
inline std::map<Partition, double> stationary_pmf_small_n(const Params& params) {
  validate(params);
  if (params.n > 8)
    throw std::invalid_argument("stationary_pmf_small_n: n must be <= 8");
  const auto states = enumerate_partitions(params.n);
  const std::size_t S = states.size();
  std::map<Partition, std::size_t> index;
  for (std::size_t s = 0; s < S; ++s) index[states[s]] = s;

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S),
                                            static_cast<Eigen::Index>(S));
  for (std::size_t s = 0; s < S; ++s) {
    const Partition& p = states[s];
    auto add = [&](const Partition& q, double rate) {
      const std::size_t t = index.at(q);
      Q(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) += rate;
      Q(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) -= rate;
    };
    const std::size_t m = p.block_count();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) add(merge(p, i, j), 1.0);
    for (const auto& b : p.blocks())
      if (b.size() >= 2)
        for (int x : b) add(erode(p, x), params.d);
  }

  Eigen::MatrixXd A = Q.transpose();
  A.row(static_cast<Eigen::Index>(S - 1)).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(S));
  rhs(static_cast<Eigen::Index>(S - 1)) = 1.0;
  const Eigen::VectorXd pi = A.partialPivLu().solve(rhs);

  const Eigen::VectorXd residual = Q.transpose() * pi;
  for (std::size_t s = 0; s < S; ++s)
    if (std::abs(residual(static_cast<Eigen::Index>(s))) > 1e-10)
      throw std::runtime_error("stationary_pmf_small_n: pi Q = 0 residual too large");
  if (std::abs(pi.sum() - 1.0) > 1e-10)
    throw std::runtime_error("stationary_pmf_small_n: probabilities do not sum to 1");

  std::map<Partition, double> pmf;
  for (std::size_t s = 0; s < S; ++s)
    pmf[states[s]] = pi(static_cast<Eigen::Index>(s));
  return pmf;
}

}  // namespace kingman::erosion
