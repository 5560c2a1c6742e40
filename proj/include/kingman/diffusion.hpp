#pragma once

// Hierarchy of conditioned Wright-Fisher diffusions and the exponential
// kernel transform producing stationary asymptotic block frequencies.
//
// Y solves dY = (1-Y) dt + sqrt(Y(1-Y)) dW from 0 (a Wright-Fisher path
// conditioned to fix), absorbed at 1. The hierarchy allocates the residual
// mass 1 - Z_1 - ... - Z_i to the next coordinate through the time change
// tau_i(t) = int_0^t ds / residual_i(s):
//   Z_1 = Y_1,  Z_{i+1}(t) = residual_i(t) * Y_{i+1}(tau_i(t)).
// Each deeper diffusion is advanced lazily on the image grid tau_i(grid)
// with per-step variance equal to the actual time increment.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kingman/partition.hpp"
#include "kingman/rng.hpp"

namespace kingman::diffusion {

struct DiffusionPath {
  std::vector<double> times;
  std::vector<double> values;
};

struct HierarchyState {
  std::vector<DiffusionPath> z_paths;      // Z_1 .. Z_K
  DiffusionPath residual;                  // 1 - Z_1 - ... - Z_K
  std::vector<std::vector<double>> tau;    // tau_1 .. tau_K on the grid
};

inline constexpr double kResidualFloor = 1e-10;  // tau treated as infinite below
inline constexpr double kAbsorbTol = 1e-12;      // freeze Y at 1 within this

namespace detail {

// One Euler-Maruyama step of the conditioned Wright-Fisher diffusion over a
// time increment h, clamped to [0,1]; returns exactly 1 once absorbed.
inline double wf_conditioned_step(double y, double h, Rng& rng) {
  if (y >= 1.0) return 1.0;
  const double var = y * (1.0 - y);
  double next = y + (1.0 - y) * h +
                (var > 0.0 ? std::sqrt(var * h) * rng.normal() : 0.0);
  if (next <= 0.0) next = 0.0;
  if (next >= 1.0 - kAbsorbTol) next = 1.0;
  return next;
}

}  // namespace detail

inline DiffusionPath simulate_conditioned_wf(double y0, double dt,
                                             double horizon, Rng& rng) {
  if (!(y0 >= 0.0 && y0 <= 1.0))
    throw std::invalid_argument("simulate_conditioned_wf: y0 outside [0,1]");
  if (!(dt > 0.0) || !(horizon >= dt))
    throw std::invalid_argument("simulate_conditioned_wf: need dt > 0, horizon >= dt");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  DiffusionPath path;
  path.times.resize(steps + 1);
  path.values.resize(steps + 1);
  double y = y0 >= 1.0 - kAbsorbTol ? 1.0 : y0;
  path.times[0] = 0.0;
  path.values[0] = y;
  for (std::size_t k = 1; k <= steps; ++k) {
    y = detail::wf_conditioned_step(y, dt, rng);
    path.times[k] = static_cast<double>(k) * dt;
    path.values[k] = y;
  }
  return path;
}

// Builds Z_1..Z_K on a uniform grid. Once a residual falls below
// kResidualFloor its time change has exploded: tau is pinned at infinity and
// the deeper diffusion is read at its limit value 1 from then on.
inline HierarchyState build_hierarchy(int K, double dt, double horizon, Rng& rng) {
  if (K < 1) throw std::invalid_argument("build_hierarchy: K must be >= 1");
  if (!(dt > 0.0) || !(horizon >= dt))
    throw std::invalid_argument("build_hierarchy: need dt > 0, horizon >= dt");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const double inf = std::numeric_limits<double>::infinity();

  HierarchyState h;
  h.z_paths.resize(static_cast<std::size_t>(K));
  h.tau.assign(static_cast<std::size_t>(K),
               std::vector<double>(steps + 1, 0.0));
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = static_cast<double>(k) * dt;
  for (auto& z : h.z_paths) {
    z.times = grid;
    z.values.assign(steps + 1, 0.0);
  }
  h.residual.times = grid;
  h.residual.values.assign(steps + 1, 1.0);

  std::vector<double> y(static_cast<std::size_t>(K), 0.0);   // Y_i at its own clock
  std::vector<double> inv_r(static_cast<std::size_t>(K), 1.0);  // 1/residual_i, last grid point

  for (std::size_t k = 1; k <= steps; ++k) {
    double residual = 1.0;
    for (int i = 0; i < K; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      double yi;
      if (i == 0) {
        y[0] = detail::wf_conditioned_step(y[0], dt, rng);
        yi = y[0];
      } else {
        // Advance Y_i on the image of the grid under tau_{i-1}.
        const double tau_prev = h.tau[ui - 1][k - 1];
        const double tau_now = h.tau[ui - 1][k];
        if (tau_now == inf) {
          yi = 1.0;
        } else {
          y[ui] = detail::wf_conditioned_step(y[ui], tau_now - tau_prev, rng);
          yi = y[ui];
        }
      }
      const double z = residual * yi;
      h.z_paths[ui].values[k] = z;
      residual -= z;
      if (residual < 0.0) residual = 0.0;
      // Trapezoid accumulation of tau_i, pinned at infinity on explosion.
      const double prev_tau = h.tau[ui][k - 1];
      if (prev_tau == inf || residual < kResidualFloor) {
        h.tau[ui][k] = inf;
      } else {
        const double inv_now = 1.0 / residual;
        h.tau[ui][k] = prev_tau + 0.5 * dt * (inv_r[ui] + inv_now);
        inv_r[ui] = inv_now;
      }
    }
    h.residual.values[k] = residual;
  }
  return h;
}

// z_i = int_0^horizon d e^{-dt} Z_i(t) dt by the trapezoid rule, unsorted.
// Requires the kernel tail e^{-d*horizon} to be negligible.
inline std::vector<double> kernel_transform(const HierarchyState& h, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("kernel_transform: d must be > 0");
  if (h.z_paths.empty() || h.z_paths.front().times.size() < 2)
    throw std::invalid_argument("kernel_transform: empty hierarchy");
  const auto& times = h.z_paths.front().times;
  const double horizon = times.back();
  if (std::exp(-d * horizon) >= 1e-6)
    throw std::invalid_argument("kernel_transform: horizon too short for d");
  std::vector<double> weights(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double step_before = k > 0 ? times[k] - times[k - 1] : 0.0;
    const double step_after = k + 1 < times.size() ? times[k + 1] - times[k] : 0.0;
    weights[k] = d * std::exp(-d * times[k]) * 0.5 * (step_before + step_after);
  }
  std::vector<double> z(h.z_paths.size(), 0.0);
  for (std::size_t i = 0; i < h.z_paths.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      acc += weights[k] * h.z_paths[i].values[k];
    z[i] = acc;
  }
  return z;
}

// Non-increasing reordering of the kernel transform.
inline MassPartition frequencies_from_hierarchy(const HierarchyState& h, double d) {
  auto z = kernel_transform(h, d);
  std::sort(z.begin(), z.end(), std::greater<>());
  return MassPartition(std::move(z));
}

}  // namespace kingman::diffusion
