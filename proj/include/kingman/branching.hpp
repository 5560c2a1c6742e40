#pragma once

// Critical binary branching: exact total-progeny pmf and an event-driven
// simulator of the population chain.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "kingman/rng.hpp"

namespace kingman::branching {

struct ProgenyOutcome {
  std::uint64_t progeny = 0;     // total particles ever alive
  double extinction_time = 0.0;  // absorption time of the count chain
};

// Catalan number C_m, exact for m <= 63 (fits in unsigned __int128).
inline unsigned __int128 catalan_exact(int m) {
  if (m < 0 || m > 63)
    throw std::invalid_argument("catalan_exact: m outside [0, 63]");
  unsigned __int128 c = 1;
  // C_m = C_{m-1} * 2(2m-1)/(m+1); the division is exact at every step.
  for (int i = 1; i <= m; ++i)
    c = c * static_cast<unsigned>(2 * (2 * i - 1)) / static_cast<unsigned>(i + 1);
  return c;
}

// P(total progeny = k) = binom(2(k-1), k-1) / (k 2^{2k-1})
//                      = Catalan(k-1) / 2^{2k-1}.
// Exact integer arithmetic up to k = 64, log-gamma beyond.
inline double total_progeny_pmf(std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("total_progeny_pmf: k must be >= 1");
  if (k <= 64) {
    const unsigned __int128 cat = catalan_exact(static_cast<int>(k) - 1);
    return std::ldexp(static_cast<double>(cat), -(2 * static_cast<int>(k) - 1));
  }
  const double kk = static_cast<double>(k);
  const double log_binom =
      std::lgamma(2.0 * kk - 1.0) - 2.0 * std::lgamma(kk);
  return std::exp(log_binom - std::log(kk) -
                  (2.0 * kk - 1.0) * 0.6931471805599453094172321);
}

// Population chain from 1 particle; birth and death both at per-capita
// `rate`, run to absorption at 0. Returns nullopt when the event budget is
// exhausted (a rare long excursion; callers count and exclude these).
inline std::optional<ProgenyOutcome> simulate_total_progeny(
    double rate, std::uint64_t max_events, Rng& rng) {
  if (!(rate > 0.0))
    throw std::invalid_argument("simulate_total_progeny: rate must be > 0");
  if (max_events == 0)
    throw std::invalid_argument("simulate_total_progeny: zero event budget");
  std::uint64_t k = 1;
  std::uint64_t births = 0;
  double t = 0.0;
  for (std::uint64_t events = 0; events < max_events; ++events) {
    t += rng.exp_standard() / (2.0 * rate * static_cast<double>(k));
    if (rng.next() & 1ULL) {
      ++k;
      ++births;
    } else {
      --k;
      if (k == 0) return ProgenyOutcome{births + 1, t};
    }
  }
  return std::nullopt;
}

}  // namespace kingman::branching
