// Shared helpers for the test suite: seeded scenario generators and small
// statistics. Generators are deterministic in the seed so failures replay.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "endomax/marginal.hpp"
#include "endomax/unit_function.hpp"

namespace testsup {

using endomax::LinkFunction;
using endomax::Marginal;
using endomax::PlNode;
using endomax::UnitFunction;

// Sorted interior x-grid with gaps >= 1/(2*(k+1)).
inline std::vector<double> random_breaks(std::mt19937_64& eng, int k) {
  std::uniform_real_distribution<double> jitter(0.1, 0.9);
  std::vector<double> xs;
  for (int i = 1; i <= k; ++i)
    xs.push_back((i + 0.5 * (jitter(eng) - 0.5)) / (k + 1));
  return xs;
}

// Continuous piecewise-linear transform with slopes capped by max_slope.
// Lipschitz instances keep the oracle brackets tight.
inline UnitFunction random_pl_lipschitz(std::mt19937_64& eng,
                                        double max_slope = 2.5,
                                        int max_interior = 6) {
  std::uniform_int_distribution<int> kd(1, max_interior);
  const int k = kd(eng);
  std::vector<double> xs = random_breaks(eng, k);
  xs.insert(xs.begin(), 0.0);
  xs.push_back(1.0);
  std::uniform_real_distribution<double> v0d(0.0, 1.0);
  std::uniform_real_distribution<double> sd(-max_slope, max_slope);
  std::vector<std::pair<double, double>> pts;
  double v = v0d(eng);
  pts.emplace_back(0.0, v);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    v = std::clamp(v + sd(eng) * (xs[i] - xs[i - 1]), 0.0, 1.0);
    pts.emplace_back(xs[i], v);
  }
  return UnitFunction::piecewise_linear(pts);
}

// General piecewise-linear transform: jumps allowed, arbitrary values.
inline UnitFunction random_pl_general(std::mt19937_64& eng,
                                      int max_interior = 6) {
  std::uniform_int_distribution<int> kd(1, max_interior);
  std::uniform_real_distribution<double> vd(0.0, 1.0);
  std::bernoulli_distribution jump(0.35);
  const int k = kd(eng);
  std::vector<double> xs = random_breaks(eng, k);
  xs.insert(xs.begin(), 0.0);
  xs.push_back(1.0);
  std::vector<PlNode> nodes;
  double left = vd(eng);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double right = jump(eng) ? vd(eng) : left;
    nodes.push_back({xs[i], left, right});
    left = vd(eng);
  }
  // Interior continuity where no jump was drawn: make left match the chord.
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    if (!jump(eng)) nodes[i].left = nodes[i].right;
  }
  return UnitFunction::piecewise_linear(std::move(nodes));
}

// Nondecreasing continuous piecewise-linear transform.
inline UnitFunction random_pl_nondecreasing(std::mt19937_64& eng,
                                            int max_interior = 6) {
  std::uniform_int_distribution<int> kd(1, max_interior);
  std::uniform_real_distribution<double> vd(0.0, 1.0);
  const int k = kd(eng);
  std::vector<double> xs = random_breaks(eng, k);
  xs.insert(xs.begin(), 0.0);
  xs.push_back(1.0);
  std::vector<double> vs;
  for (std::size_t i = 0; i < xs.size(); ++i) vs.push_back(vd(eng));
  std::sort(vs.begin(), vs.end());
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], vs[i]);
  return UnitFunction::piecewise_linear(pts);
}

inline Marginal random_marginal(std::mt19937_64& eng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind(eng)) {
    case 0:
      return Marginal::exponential(0.5 + 2.0 * u(eng));
    case 1: {
      const double lo = -1.0 + u(eng);
      return Marginal::uniform(lo, lo + 0.5 + 2.0 * u(eng));
    }
    default: {
      std::vector<std::pair<double, double>> nodes;
      const int k = 3 + static_cast<int>(u(eng) * 3.0);
      double x = -0.5 + u(eng);
      std::vector<double> fs;
      for (int i = 0; i < k; ++i) fs.push_back(u(eng));
      std::sort(fs.begin(), fs.end());
      fs.front() = 0.0;
      fs.back() = 1.0;
      for (int i = 0; i < k; ++i) {
        nodes.emplace_back(x, fs[static_cast<std::size_t>(i)]);
        x += 0.2 + u(eng);
      }
      // Drop any flat framework steps: F must increase strictly in x but the
      // factory requires nondecreasing F only; keep distinct F values.
      std::vector<std::pair<double, double>> clean;
      for (const auto& nd : nodes) {
        if (!clean.empty() && nd.second <= clean.back().second + 1e-9) continue;
        clean.push_back(nd);
      }
      if (clean.size() < 2 || clean.back().second < 1.0)
        return Marginal::uniform(0.0, 1.0);
      return Marginal::piecewise_linear_cdf(clean);
    }
  }
}

inline LinkFunction random_link(std::mt19937_64& eng, const Marginal& f) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind(eng)) {
    case 0:
      return LinkFunction::identity();
    case 1:
      return LinkFunction::affine(0.25 + 2.0 * u(eng), -0.5 + u(eng));
    default: {
      const double lo = f.support_lo();
      const double hi = std::isfinite(f.support_hi()) ? f.support_hi()
                                                      : f.quantile(0.995);
      const int k = 4 + static_cast<int>(u(eng) * 4.0);
      std::vector<double> xs, ys;
      for (int i = 0; i < k; ++i) {
        xs.push_back(lo + (hi - lo) * i / (k - 1));
        ys.push_back(-0.5 + 2.0 * u(eng));
      }
      return LinkFunction::gridded_real(xs, ys);
    }
  }
}

// Kolmogorov-Smirnov distance of a sample against the uniform law on [0,1].
inline double ks_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(v[i] - lo), std::fabs(v[i] - hi)));
  }
  return d;
}

// KS distance of a sample against an arbitrary continuous cdf.
template <class F>
double ks_against(std::vector<double> v, const F& cdf) {
  for (double& x : v) x = cdf(x);
  return ks_uniform(std::move(v));
}

}  // namespace testsup
