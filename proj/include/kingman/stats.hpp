#pragma once

// Statistical backbone: empirical pmfs, goodness-of-fit and two-sample
// tests, and distances between distributions. All tests are deterministic
// functions of their input samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace kingman {

struct EmpiricalPmf {
  std::map<long, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(long outcome, std::uint64_t weight = 1) {
    counts[outcome] += weight;
    total += weight;
  }

  double frequency(long outcome) const {
    const auto it = counts.find(outcome);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) /
                                    static_cast<double>(total);
  }

  std::map<long, double> to_pmf() const {
    if (total == 0) throw std::invalid_argument("EmpiricalPmf: no samples");
    std::map<long, double> pmf;
    for (const auto& [k, c] : counts)
      pmf[k] = static_cast<double>(c) / static_cast<double>(total);
    return pmf;
  }
};

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

inline double chi_square_upper_tail(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_upper_tail: dof < 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

// Pearson goodness-of-fit. `expected` is a pmf over outcomes (it must cover
// every observed outcome and sum to ~1). Cells whose expected count falls
// below min_cell are pooled into a single tail cell before the statistic is
// formed; dof = cells - 1.
inline GofResult chi_square_gof(const EmpiricalPmf& emp,
                                const std::map<long, double>& expected,
                                int min_cell = 5) {
  if (emp.total == 0) throw std::invalid_argument("chi_square_gof: no samples");
  double psum = 0.0;
  for (const auto& [k, p] : expected) {
    if (p < 0.0) throw std::invalid_argument("chi_square_gof: negative prob");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-6)
    throw std::invalid_argument("chi_square_gof: expected pmf not normalized");
  for (const auto& [k, c] : emp.counts)
    if (expected.find(k) == expected.end() && c > 0)
      throw std::invalid_argument(
          "chi_square_gof: observed outcome missing from expected pmf");

  const double n = static_cast<double>(emp.total);
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (const auto& [k, p] : expected) {
    const double e = n * p;
    const double o = static_cast<double>(
        emp.counts.count(k) ? emp.counts.at(k) : std::uint64_t{0});
    if (e < static_cast<double>(min_cell)) {
      pooled_obs += o;
      pooled_exp += e;
    } else {
      cells.emplace_back(o, e);
    }
  }
  if (pooled_exp > 0.0) cells.emplace_back(pooled_obs, pooled_exp);
  if (cells.size() < 2)
    throw std::invalid_argument("chi_square_gof: fewer than 2 cells after merging");

  GofResult r;
  for (const auto& [o, e] : cells) r.statistic += (o - e) * (o - e) / e;
  r.dof = static_cast<int>(cells.size()) - 1;
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

// Two-sample chi-square homogeneity test on a common outcome space. Cells
// with pooled expected count below min_cell (in the smaller sample) are
// merged into a tail cell.
inline GofResult chi_square_two_sample(const EmpiricalPmf& a,
                                       const EmpiricalPmf& b,
                                       int min_cell = 5) {
  if (a.total == 0 || b.total == 0)
    throw std::invalid_argument("chi_square_two_sample: empty sample");
  std::map<long, std::pair<double, double>> joint;
  for (const auto& [k, c] : a.counts) joint[k].first = static_cast<double>(c);
  for (const auto& [k, c] : b.counts) joint[k].second = static_cast<double>(c);

  const double na = static_cast<double>(a.total);
  const double nb = static_cast<double>(b.total);
  const double nmin = std::min(na, nb);

  std::vector<std::pair<double, double>> cells;
  double pa = 0.0, pb = 0.0, ppool = 0.0;
  for (const auto& [k, oc] : joint) {
    const double pooled = (oc.first + oc.second) / (na + nb);
    if (pooled * nmin < static_cast<double>(min_cell)) {
      pa += oc.first;
      pb += oc.second;
      ppool += pooled;
    } else {
      cells.emplace_back(oc.first, oc.second);
    }
  }
  if (ppool > 0.0) cells.emplace_back(pa, pb);
  if (cells.size() < 2)
    throw std::invalid_argument(
        "chi_square_two_sample: fewer than 2 cells after merging");

  GofResult r;
  for (const auto& [oa, ob] : cells) {
    const double tot = oa + ob;
    const double ea = na * tot / (na + nb);
    const double eb = nb * tot / (na + nb);
    if (ea > 0.0) r.statistic += (oa - ea) * (oa - ea) / ea;
    if (eb > 0.0) r.statistic += (ob - eb) * (ob - eb) / eb;
  }
  r.dof = static_cast<int>(cells.size()) - 1;
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

inline double tv_distance(const std::map<long, double>& a,
                          const std::map<long, double>& b) {
  double sa = 0.0, sb = 0.0;
  for (const auto& [k, p] : a) sa += p;
  for (const auto& [k, p] : b) sb += p;
  if (std::abs(sa - 1.0) > 1e-9 || std::abs(sb - 1.0) > 1e-9)
    throw std::invalid_argument("tv_distance: pmf not normalized");
  double tv = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      tv += std::abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      tv += std::abs(ib->second);
      ++ib;
    } else {
      tv += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * tv;
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1}
// exp(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

inline KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  const double ne = std::sqrt(nx * ny / (nx + ny));
  KsResult r;
  r.statistic = d;
  // Stephens' finite-sample correction to the asymptotic law.
  r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

// Wasserstein-1 between empirical measures, as the area between the two
// empirical cdfs.
inline double wasserstein1(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("wasserstein1: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  double w = 0.0;
  std::size_t i = 0, j = 0;
  double prev = std::min(x[0], y[0]);
  while (i < x.size() || j < y.size()) {
    const double xv = i < x.size() ? x[i] : std::numeric_limits<double>::infinity();
    const double yv = j < y.size() ? y[j] : std::numeric_limits<double>::infinity();
    const double v = std::min(xv, yv);
    w += std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny) *
         (v - prev);
    prev = v;
    if (xv <= v) ++i;
    if (yv <= v) ++j;
  }
  return w;
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("sample_variance: need >= 2");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double correlation(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("correlation: mismatched or tiny samples");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("correlation: degenerate sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace kingman
