// Continuous real-line marginal distributions and link functions.
//
// Every marginal here is atomless by construction (the constructors reject
// inputs that would create jumps), which is the standing assumption behind
// the kernel transfer. Quasi-inverses follow F^-(q) = inf{x : F(x) >= q};
// unbounded supports return +/-infinity at q = 1 / q = 0, and samplers draw
// from the open interval (0,1) so those values never occur in samples.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "endomax/common.hpp"
#include "endomax/rng.hpp"

namespace endomax {

class Marginal {
 public:
  enum class Kind { Exponential, Uniform, PiecewiseLinearCdf, EmpiricalContinuous };

  static Marginal exponential(double rate);
  static Marginal uniform(double a, double b);
  // Nodes (x, F(x)) with strictly increasing x, F nondecreasing from 0 to 1.
  // Jumps are unrepresentable, so the result is always continuous.
  static Marginal piecewise_linear_cdf(std::vector<std::pair<double, double>> nodes);
  // Linear interpolation between order statistics; F(x_(1)) = 0,
  // F(x_(n)) = 1. Tied observations would create an atom and are rejected.
  static Marginal empirical_continuous(std::vector<double> sample);

  Kind kind() const { return kind_; }
  double cdf(double x) const;       // accepts any real incl. +/-infinity
  double quantile(double q) const;  // q in [0,1]
  double support_lo() const;        // may be -infinity
  double support_hi() const;        // may be +infinity
  double sample(Rng& rng) const;    // quantile of an open-(0,1) draw

  double rate() const;              // Exponential
  std::pair<double, double> bounds() const;  // Uniform
  const std::vector<std::pair<double, double>>& nodes() const;

  bool operator==(const Marginal& o) const;
  std::string describe() const;

 private:
  Marginal() = default;

  Kind kind_ = Kind::Uniform;
  double rate_ = 1.0;
  double a_ = 0.0, b_ = 1.0;
  std::vector<std::pair<double, double>> nodes_;  // (x, F(x))
};

// Borel link S applied to the first variable; total on the real line.
class LinkFunction {
 public:
  enum class Kind { Identity, Affine, GriddedReal };

  static LinkFunction identity();
  static LinkFunction affine(double slope, double intercept);
  // Piecewise-linear through (breakpoints[i], values[i]) on the window
  // [breakpoints.front(), breakpoints.back()], constant extension outside.
  static LinkFunction gridded_real(std::vector<double> breakpoints,
                                   std::vector<double> values);

  Kind kind() const { return kind_; }
  double operator()(double x) const;
  bool nondecreasing() const;
  double slope() const;      // Affine
  double intercept() const;  // Affine
  const std::vector<double>& breakpoints() const;
  const std::vector<double>& values() const;
  std::string describe() const;

 private:
  LinkFunction() = default;

  Kind kind_ = Kind::Identity;
  double slope_ = 1.0, intercept_ = 0.0;
  std::vector<double> xs_, ys_;
};

}  // namespace endomax
