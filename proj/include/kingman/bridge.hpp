#pragma once

// Exchangeable bridges and the standard flow of bridges.
//
// A bridge is B(u) = drift*u + sum_i mass_i * 1{u >= loc_i} with
// drift + sum(mass) = 1. The standard flow's marginal at duration t is the
// zero-drift bridge whose atom count is the pure-death chain (rate
// k(k-1)/2) run from infinity for time t, with Dirichlet(1,...,1) masses at
// iid uniform locations. Sampling those marginals over the gaps between
// exponential look-back times and composing their inverses yields an exact
// stationary draw of the erosion coalescent, independent of the coupling
// sampler's code path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kingman/partition.hpp"
#include "kingman/rng.hpp"

namespace kingman {

struct BridgeAtom {
  double location = 0.0;
  double mass = 0.0;
};

class Bridge {
 public:
  Bridge(std::vector<BridgeAtom> atoms, double drift) : drift_(drift) {
    std::sort(atoms.begin(), atoms.end(),
              [](const BridgeAtom& a, const BridgeAtom& b) {
                return a.location < b.location;
              });
    loc_.reserve(atoms.size());
    cum_.reserve(atoms.size());
    double acc = 0.0;
    for (const auto& a : atoms) {
      if (!(a.location > 0.0 && a.location < 1.0))
        throw std::invalid_argument("Bridge: atom location outside (0,1)");
      if (!(a.mass >= 0.0)) throw std::invalid_argument("Bridge: negative mass");
      if (!loc_.empty() && a.location == loc_.back())
        throw std::invalid_argument("Bridge: duplicate atom location");
      acc += a.mass;
      loc_.push_back(a.location);
      cum_.push_back(acc);
    }
    validate();
  }

  static Bridge identity() { return Bridge({}, 1.0); }

  // Construction from pre-summed masses; used by compose() to keep the
  // composed prefix bitwise equal to outer(inner(.)).
  static Bridge from_sorted_prefix(std::vector<double> locations,
                                   std::vector<double> prefix, double drift) {
    Bridge b;
    b.loc_ = std::move(locations);
    b.cum_ = std::move(prefix);
    b.drift_ = drift;
    for (std::size_t i = 0; i < b.loc_.size(); ++i) {
      if (!(b.loc_[i] > 0.0 && b.loc_[i] < 1.0))
        throw std::invalid_argument("Bridge: atom location outside (0,1)");
      if (i > 0 && !(b.loc_[i] > b.loc_[i - 1]))
        throw std::invalid_argument("Bridge: locations not strictly increasing");
      if (!(b.cum_[i] >= (i ? b.cum_[i - 1] : 0.0)))
        throw std::invalid_argument("Bridge: prefix not non-decreasing");
    }
    b.validate();
    return b;
  }

  double drift() const { return drift_; }
  std::size_t atom_count() const { return loc_.size(); }
  double total_atom_mass() const { return cum_.empty() ? 0.0 : cum_.back(); }
  const std::vector<double>& locations() const { return loc_; }
  const std::vector<double>& atom_prefix() const { return cum_; }

  std::vector<BridgeAtom> atoms() const {
    std::vector<BridgeAtom> out(loc_.size());
    for (std::size_t i = 0; i < loc_.size(); ++i)
      out[i] = {loc_[i], cum_[i] - (i ? cum_[i - 1] : 0.0)};
    return out;
  }

  // B(u) = drift*u + mass of atoms with location <= u.
  double eval(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
      throw std::out_of_range("Bridge::eval: u outside [0,1]");
    const auto it = std::upper_bound(loc_.begin(), loc_.end(), u);
    const double atom_part =
        it == loc_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - loc_.begin()) - 1];
    return drift_ * u + atom_part;
  }

  // Generalized inverse inf{t : B(t) > u}, with inverse(1) = 1. Exact on
  // step bridges: the value is an atom location (or 1).
  double inverse(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
      throw std::out_of_range("Bridge::inverse: u outside [0,1]");
    if (u >= 1.0) return 1.0;
    // Smallest atom index with B(loc_k) > u.
    std::size_t lo = 0, hi = loc_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (drift_ * loc_[mid] + cum_[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    const double base = lo == 0 ? 0.0 : cum_[lo - 1];
    if (lo == loc_.size()) {
      // Crossing beyond the last atom; only reachable with positive drift.
      if (drift_ <= 0.0) return 1.0;
      return std::min((u - base) / drift_, 1.0);
    }
    if (drift_ > 0.0) {
      const double t_star = (u - base) / drift_;
      if (t_star < loc_[lo]) return t_star;
    }
    return loc_[lo];
  }

  // Index of the atom selected by inverse(u) on a zero-drift bridge, or -1
  // when u falls past the total mass (the inverse(1) = 1 convention).
  int inverse_atom_index(double u) const {
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) return -1;
    return static_cast<int>(it - cum_.begin());
  }

  double location_of(std::size_t atom_index) const { return loc_.at(atom_index); }

 private:
  Bridge() = default;

  void validate() const {
    if (!(drift_ >= 0.0)) throw std::invalid_argument("Bridge: negative drift");
    const double total = drift_ + total_atom_mass();
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("Bridge: drift + atom mass must equal 1");
  }

  std::vector<double> loc_;
  std::vector<double> cum_;  // prefix atom mass in location order
  double drift_ = 0.0;
};

// Function composition outer(inner(.)) of two zero-drift step bridges,
// represented again as a bridge. The composition jumps only at inner atom
// locations; the jump at inner atom i collects the outer mass sitting in
// (c_{i-1}, c_i], where c is the inner prefix. Prefixes are injected
// directly so composed evaluation is bitwise equal to the nested one.
inline Bridge compose(const Bridge& outer, const Bridge& inner) {
  if (outer.drift() > 0.0 || inner.drift() > 0.0)
    throw std::invalid_argument("compose: only zero-drift step bridges");
  std::vector<double> loc;
  std::vector<double> cum;
  loc.reserve(inner.atom_count());
  cum.reserve(inner.atom_count());
  double prev = 0.0;
  for (std::size_t i = 0; i < inner.atom_count(); ++i) {
    const double value = outer.eval(std::min(inner.atom_prefix()[i], 1.0));
    if (value > prev) {
      loc.push_back(inner.locations()[i]);
      cum.push_back(value);
      prev = value;
    }
  }
  return Bridge::from_sorted_prefix(std::move(loc), std::move(cum), 0.0);
}

namespace flow {

// Pure-death descent (rate k(k-1)/2) from `start_level` for time t; returns
// the end level. Absorbs at 1.
inline int death_descent(std::int64_t start_level, double t, Rng& rng) {
  double elapsed = 0.0;
  for (std::int64_t k = start_level; k >= 2; --k) {
    const double rate = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    elapsed += rng.exp_standard() / rate;
    if (elapsed > t) return static_cast<int>(k);
  }
  return 1;
}

// Number of blocks after running the death chain from infinity for time t.
// The entrance from infinity is truncated at K0 = ceil(4/(eps*t)): the
// neglected entrance time has mean 2/K0 <= eps*t/2.
inline int sample_death_count_from_infinity(double t, double eps, Rng& rng) {
  if (!(t > 0.0))
    throw std::invalid_argument("sample_death_count_from_infinity: t must be > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("sample_death_count_from_infinity: eps in (0,1)");
  const double k0 = std::ceil(4.0 / (eps * t));
  const std::int64_t start =
      k0 > 9.0e18 ? std::int64_t{1} << 62 : std::max<std::int64_t>(1, static_cast<std::int64_t>(k0));
  return death_descent(start, t, rng);
}

inline int sample_death_count_from_infinity(double t, Rng& rng) {
  return sample_death_count_from_infinity(t, 1e-3, rng);
}

// Standard-flow marginal at duration t: death-count atoms, Dirichlet(1,..,1)
// masses, iid uniform locations, zero drift.
inline Bridge sample_standard_bridge_from_count(int n_atoms, Rng& rng) {
  if (n_atoms < 1)
    throw std::invalid_argument("sample_standard_bridge: atom count must be >= 1");
  std::vector<std::pair<double, double>> atoms(static_cast<std::size_t>(n_atoms));
  double total = 0.0;
  for (auto& [loc, mass] : atoms) {
    loc = rng.uniform();
    mass = rng.exp_standard();
    total += mass;
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> loc(atoms.size());
  std::vector<double> cum(atoms.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    loc[i] = atoms[i].first;
    acc += atoms[i].second / total;
    cum[i] = acc;
  }
  cum.back() = 1.0;  // pin the normalized prefix exactly
  return Bridge::from_sorted_prefix(std::move(loc), std::move(cum), 0.0);
}

inline Bridge sample_standard_bridge(double t, Rng& rng, double eps = 1e-3) {
  return sample_standard_bridge_from_count(
      sample_death_count_from_infinity(t, eps, rng), rng);
}

struct FlowOptions {
  // Entrance-from-infinity truncation for each increment bridge. The mean
  // neglected entrance time is eps/2 of the increment length, which acts as
  // a uniform relative coalescence-time dilation of the same order.
  double eps = 5e-3;
  // Increments shorter than this are applied as the identity map. Set <= 0
  // to pick the width automatically so that the omitted coalescence
  // probability (second order in the floor) stays below ~1e-4.
  double min_increment = 0.0;
};

inline double auto_min_increment(int n, double d) {
  const double n4 = std::pow(static_cast<double>(n), 4);
  const double f = std::sqrt(8e-4 / (d * n4));
  return std::min(0.05, std::max(1e-8, f));
}

// Exact-in-law stationary sample of the erosion coalescent from the flow of
// bridges: each label looks back an independent Exp(d) time and carries a
// uniform mark; labels are grouped by the common ancestor their marks select
// through the composed increment inverses. Ancestors are tracked as atom
// identities, so the final grouping involves no float tolerance.
inline Partition sample_stationary_erosion_via_flow(int n, double d, Rng& rng,
                                                    const FlowOptions& options = {}) {
  if (n < 1)
    throw std::invalid_argument("sample_stationary_erosion_via_flow: n >= 1");
  if (!(d > 0.0))
    throw std::invalid_argument("sample_stationary_erosion_via_flow: d > 0");

  std::vector<std::pair<double, int>> lookback(static_cast<std::size_t>(n));
  std::vector<double> value(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    lookback[static_cast<std::size_t>(i)] = {rng.exponential(d), i};
    value[static_cast<std::size_t>(i)] = rng.uniform();
  }
  // Deepest look-back first; its mark passes through every increment.
  std::sort(lookback.begin(), lookback.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  const double floor = options.min_increment > 0.0
                           ? options.min_increment
                           : auto_min_increment(n, d);

  std::vector<int> active;  // label indices, activated deepest-first
  active.reserve(static_cast<std::size_t>(n));
  std::size_t next = 0;
  while (next < lookback.size()) {
    const double t_edge = lookback[next].first;
    while (next < lookback.size() && lookback[next].first == t_edge) {
      active.push_back(lookback[next].second);
      ++next;
    }
    // This batch of activations sits at the left edge of the increment
    // (-t_edge, -prev_edge]; deeper labels already carry mapped values.
    const double prev_edge = next < lookback.size() ? lookback[next].first : 0.0;
    const double len = t_edge - prev_edge;
    if (len < floor) continue;  // identity shortcut, see FlowOptions
    const double k0 = std::ceil(4.0 / (options.eps * len));
    const int n_atoms = death_descent(
        std::max<std::int64_t>(1, static_cast<std::int64_t>(k0)), len, rng);
    const Bridge b = sample_standard_bridge_from_count(n_atoms, rng);
    for (int label : active) {
      auto& v = value[static_cast<std::size_t>(label)];
      int idx = b.inverse_atom_index(v);
      if (idx < 0) idx = static_cast<int>(b.atom_count()) - 1;
      v = b.location_of(static_cast<std::size_t>(idx));
    }
  }

  // Labels sharing an ancestor share the exact atom location double;
  // untouched labels keep their distinct uniform marks.
  std::map<double, std::vector<int>> groups;
  for (int i = 0; i < n; ++i)
    groups[value[static_cast<std::size_t>(i)]].push_back(i + 1);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(groups.size());
  for (auto& [v, members] : groups) blocks.push_back(std::move(members));
  return Partition(std::move(blocks));
}

}  // namespace flow
}  // namespace kingman
