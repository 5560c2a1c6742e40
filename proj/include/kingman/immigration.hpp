#pragma once

// Kingman's coalescent with immigration: blocks coalesce pairwise at rate 1
// and new singleton blocks immigrate at rate d. The block count is a
// reversible birth-death chain with an explicit stationary law; the backward
// ancestral process of sampled blocks is Markov with per-particle rates
// d/N (birth) and (N-1)/2 (death).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kingman/rng.hpp"

namespace kingman::immigration {

// State of the backward ancestral walk: per-type particle counts plus the
// total population N. Sum of typed counts never exceeds the total.
struct AncestralState {
  std::vector<std::uint64_t> typed_counts;
  std::uint64_t typed_total = 0;
  std::uint64_t total = 0;

  void check() const {
    if (typed_total > total || total < 1)
      throw std::logic_error("AncestralState: typed count exceeded N");
  }
};

// Stationary block-count pmf: nu_k proportional to (2d)^k / (k! (k-1)!),
// built by the recurrence nu_{k+1} = nu_k * 2d / (k (k+1)). Index i holds
// nu_{i+1}. Throws if the tail past k_max is not negligible.
inline std::vector<double> block_count_stationary_pmf(double d_imm, int k_max) {
  if (!(d_imm > 0.0))
    throw std::invalid_argument("block_count_stationary_pmf: d must be > 0");
  if (k_max < 1)
    throw std::invalid_argument("block_count_stationary_pmf: k_max must be >= 1");
  std::vector<double> nu(static_cast<std::size_t>(k_max));
  nu[0] = 1.0;
  double total = 1.0;
  for (int k = 1; k < k_max; ++k) {
    nu[static_cast<std::size_t>(k)] =
        nu[static_cast<std::size_t>(k - 1)] * 2.0 * d_imm /
        (static_cast<double>(k) * static_cast<double>(k + 1));
    total += nu[static_cast<std::size_t>(k)];
  }
  // Geometric tail bound from the decreasing jump ratio.
  const double ratio =
      2.0 * d_imm / (static_cast<double>(k_max) * static_cast<double>(k_max + 1));
  if (ratio >= 1.0 || nu.back() * ratio / (1.0 - ratio) > 1e-12 * total)
    throw std::invalid_argument(
        "block_count_stationary_pmf: tail not negligible at k_max");
  for (auto& v : nu) v /= total;
  return nu;
}

// Smallest k_max with a negligible tail for this rate.
inline int block_count_k_max(double d_imm) {
  int k = static_cast<int>(std::ceil(std::sqrt(2.0 * d_imm))) + 16;
  for (;;) {
    const double ratio =
        2.0 * d_imm / (static_cast<double>(k) * static_cast<double>(k + 1));
    if (ratio < 0.5 && std::pow(ratio, 8) < 1e-18) return k + 8;
    k += k / 2 + 8;
  }
}

inline std::vector<double> block_count_stationary_pmf(double d_imm) {
  return block_count_stationary_pmf(d_imm, block_count_k_max(d_imm));
}

inline int sample_from_pmf(const std::vector<double>& pmf, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i];
    if (u < acc) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(pmf.size());
}

struct BlockCountPath {
  double t_end = 0.0;
  std::vector<double> times;  // jump times, first entry 0
  std::vector<int> counts;    // value entered at the matching time
};

// Birth-death path: k -> k+1 at rate d, k -> k-1 at rate k(k-1)/2.
inline BlockCountPath simulate_block_count(double d_imm, double t_end,
                                           int initial, Rng& rng) {
  if (!(d_imm > 0.0))
    throw std::invalid_argument("simulate_block_count: d must be > 0");
  if (initial < 1)
    throw std::invalid_argument("simulate_block_count: initial must be >= 1");
  if (!(t_end > 0.0))
    throw std::invalid_argument("simulate_block_count: t_end must be > 0");
  BlockCountPath path;
  path.t_end = t_end;
  path.times.push_back(0.0);
  path.counts.push_back(initial);
  double t = 0.0;
  int k = initial;
  for (;;) {
    const double down = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    const double rate = d_imm + down;
    t += rng.exp_standard() / rate;
    if (t > t_end) break;
    k += (rng.uniform() * rate < d_imm) ? 1 : -1;
    path.times.push_back(t);
    path.counts.push_back(k);
  }
  return path;
}

// Time-weighted occupancy of a block-count path, as a pmf over k.
inline std::vector<double> occupancy_pmf(const BlockCountPath& path) {
  if (path.times.empty()) throw std::invalid_argument("occupancy_pmf: empty path");
  int k_max = *std::max_element(path.counts.begin(), path.counts.end());
  std::vector<double> occ(static_cast<std::size_t>(k_max), 0.0);
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double until =
        i + 1 < path.times.size() ? path.times[i + 1] : path.t_end;
    occ[static_cast<std::size_t>(path.counts[i] - 1)] += until - path.times[i];
  }
  for (auto& v : occ) v /= path.t_end;
  return occ;
}

struct ProgenyRecord {
  std::uint64_t deaths = 0;  // block size: one immigrated label per death
  double lifetime = 0.0;     // extinction time of the type
};

enum class AncestralOutcome {
  completed,
  // The typed particles swept the whole population. Untyped rebirth then has
  // rate (d/k)(k - sum a) = 0 and the typed count can no longer reach 0, so
  // the walk would run forever: the sample picked the one block whose
  // ancestry extends through the entire past (the count chain visits 1
  // infinitely often, so all sufficiently old immigrants share a block).
  // Happens with probability ~ p E[1/N].
  swept_all_typed,
  budget_exhausted,
};

struct AncestralSample {
  AncestralOutcome outcome = AncestralOutcome::completed;
  std::vector<ProgenyRecord> types;  // valid only when completed
  std::uint64_t restarts = 0;        // N_0 < p rejections before this run
};

struct AncestralOptions {
  std::uint64_t max_events = 10'000'000;
};

// Backward genealogy of p blocks drawn uniformly from the stationary
// partition. N_0 is drawn from the closed-form stationary law (the count
// chain is reversible, so the backward chain is stationary with the same
// law), conditioned on N_0 >= p by rejection. Types i <= p start with one
// particle each; each particle births at rate d/N and dies at rate (N-1)/2;
// the walk runs until every typed particle is gone. Death counts are the
// block sizes. Non-completed outcomes carry no type records and are meant
// to be counted and excluded by the caller.
inline AncestralSample simulate_ancestral(int p, double d_imm, Rng& rng,
                                          const AncestralOptions& options = {}) {
  if (p < 1) throw std::invalid_argument("simulate_ancestral: p must be >= 1");
  if (!(d_imm > 0.0))
    throw std::invalid_argument("simulate_ancestral: d must be > 0");
  const auto nu = block_count_stationary_pmf(d_imm);

  AncestralSample out;
  out.types.assign(static_cast<std::size_t>(p), ProgenyRecord{});
  std::uint64_t n0;
  for (;;) {
    n0 = static_cast<std::uint64_t>(sample_from_pmf(nu, rng));
    if (n0 >= static_cast<std::uint64_t>(p)) break;
    ++out.restarts;
  }

  AncestralState state;
  state.typed_counts.assign(static_cast<std::size_t>(p), 1);
  state.typed_total = static_cast<std::uint64_t>(p);
  state.total = n0;
  double t = 0.0;
  std::uint64_t events = 0;
  while (state.typed_total > 0) {
    if (state.typed_total == state.total) {
      out.outcome = AncestralOutcome::swept_all_typed;
      return out;
    }
    if (++events > options.max_events) {
      out.outcome = AncestralOutcome::budget_exhausted;
      return out;
    }
    state.check();
    const double n = static_cast<double>(state.total);
    const double birth = d_imm;  // d/N per particle, N particles
    const double death = 0.5 * n * (n - 1.0);
    const double rate = birth + death;
    t += rng.exp_standard() / rate;
    const bool is_birth = rng.uniform() * rate < birth;
    // The affected particle is uniform among the N present; it is of type i
    // with probability typed[i]/N for both birth and death events.
    const std::uint64_t idx = rng.below(state.total);
    int type = -1;
    if (idx < state.typed_total) {
      std::uint64_t acc = 0;
      for (int i = 0; i < p; ++i) {
        acc += state.typed_counts[static_cast<std::size_t>(i)];
        if (idx < acc) {
          type = i;
          break;
        }
      }
    }
    if (is_birth) {
      ++state.total;
      if (type >= 0) {
        ++state.typed_counts[static_cast<std::size_t>(type)];
        ++state.typed_total;
      }
    } else {
      --state.total;
      if (type >= 0) {
        auto& tc = state.typed_counts[static_cast<std::size_t>(type)];
        --tc;
        --state.typed_total;
        ++out.types[static_cast<std::size_t>(type)].deaths;
        if (tc == 0) out.types[static_cast<std::size_t>(type)].lifetime = t;
      }
    }
  }
  out.outcome = AncestralOutcome::completed;
  return out;
}

struct ScalingRow {
  int n = 0;
  double mean_over_sqrt_n = 0.0;
  double std_error = 0.0;
};

// Draws stationary block counts at immigration rate n*d and reports
// mean(N)/sqrt(n) with its standard error; the large-n limit is sqrt(2d).
inline std::vector<ScalingRow> rescaled_block_count_check(
    const std::vector<int>& n_values, double d, int replicates, Rng& rng) {
  if (replicates < 2)
    throw std::invalid_argument("rescaled_block_count_check: need >= 2 replicates");
  std::vector<ScalingRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    if (n < 1)
      throw std::invalid_argument("rescaled_block_count_check: n must be >= 1");
    const auto nu = block_count_stationary_pmf(static_cast<double>(n) * d);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < replicates; ++r) {
      const double v = static_cast<double>(sample_from_pmf(nu, rng)) / sqrt_n;
      sum += v;
      sumsq += v * v;
    }
    const double m = sum / replicates;
    const double var = (sumsq - sum * sum / replicates) / (replicates - 1);
    rows.push_back({n, m, std::sqrt(std::max(0.0, var) / replicates)});
  }
  return rows;
}

}  // namespace kingman::immigration
