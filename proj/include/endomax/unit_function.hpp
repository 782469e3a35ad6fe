#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "endomax/common.hpp"

namespace endomax {

class Cdf;

enum class Monotonicity { NonDecreasing, PiecewiseMonotone, General };

// Node of a piecewise-linear function on [0,1]. The function value at x is
// `right`; `left` is the limit from below (they differ exactly at jumps).
// Between nodes the function interpolates right(i) -> left(i+1). The value
// at the last node (x = 1) is its `right` field, so an isolated endpoint
// value such as "jump to 1 at x = 1" is representable.
struct PlNode {
  double x;
  double left;
  double right;
};

// One maximal monotone piece of a transformation, as used by the pushforward
// and oracle machinery. y0/y1 are the values of the continuous extension at
// the piece endpoints (pointwise values at shared junctions may differ on a
// null set; that never matters for any measure computation).
struct Branch {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 0.0;
  int dir = 0;  // +1 increasing, -1 decreasing, 0 constant
  bool affine = true;
  std::function<double(double)> eval;     // when !affine
  std::function<double(double)> inverse;  // value -> x on the piece; may be null
  std::function<double(double)> deriv;    // optional, for graph-mass quadrature

  double value_at(double x) const;
  bool invertible() const { return dir == 0 || affine || inverse != nullptr; }
};

// A measurable transformation of [0,1] into itself.
//
// Constructible kinds:
//   piecewise_linear  nodes with optional jumps
//   step              k equal cells [i/k,(i+1)/k) (last closed), constant each
//   gridded           same layout; by convention values sampled at midpoints
//   exp_ratio(theta)  x -> 1 - (1-x)^theta, theta > 0
//   ex_gegen(n)       x/2 | 1/4 + (1/4)(4x-2)^(1/n) | 2x-1  (homeomorphism)
//   parabola          x -> 4(x - 1/2)^2
//
// Two internal kinds are produced by operations and are not part of the
// constructor surface: quantile (quasi-inverse of a Cdf, the nondecreasing
// rearrangement) and analytic (closure with monotone-branch metadata, used
// for reflections of parametric kinds and marginal compositions).
class UnitFunction {
 public:
  enum class Kind {
    PiecewiseLinear,
    Step,
    Gridded,
    ExpRatio,
    ExGegen,
    Parabola,
    Quantile,
    Analytic
  };

  static UnitFunction piecewise_linear(std::vector<PlNode> nodes);
  // Continuous convenience constructor.
  static UnitFunction piecewise_linear(
      const std::vector<std::pair<double, double>>& points);
  static UnitFunction step(std::vector<double> values);
  static UnitFunction gridded(std::vector<double> values);
  static UnitFunction exp_ratio(double theta);
  static UnitFunction ex_gegen(int n);
  static UnitFunction parabola();
  static UnitFunction identity();
  static UnitFunction constant(double c);
  static UnitFunction quantile_of(std::shared_ptr<const Cdf> cdf);
  static UnitFunction analytic(std::vector<Branch> branches,
                               Monotonicity mono);
  // Pointwise pins T(0) = 0 and T(1) = 1 where the base disagrees. Pins live
  // on a null set: branches and every measure computation are untouched.
  static UnitFunction with_unit_endpoints(UnitFunction base);

  Kind kind() const { return kind_; }
  Monotonicity monotonicity() const { return mono_; }

  double operator()(double x) const;

  // Parameters of the parametric kinds.
  double theta() const;
  int n_param() const;
  const std::vector<PlNode>& nodes() const;
  const std::vector<double>& values() const;
  std::shared_ptr<const Cdf> source_cdf() const;

  // Maximal monotone pieces covering [0,1], in order.
  const std::vector<Branch>& branches() const;

  bool is_identity() const;

 private:
  UnitFunction() = default;

  Kind kind_ = Kind::PiecewiseLinear;
  Monotonicity mono_ = Monotonicity::General;
  std::vector<PlNode> nodes_;           // PiecewiseLinear
  std::vector<double> values_;          // Step / Gridded
  double theta_ = 0.0;                  // ExpRatio
  int n_ = 0;                           // ExGegen
  std::shared_ptr<const Cdf> cdf_;      // Quantile
  std::shared_ptr<const std::vector<Branch>> branches_;
  bool pin0_ = false;  // evaluate to 0 at x = 0 (endpoint convention)
  bool pin1_ = false;  // evaluate to 1 at x = 1
};

// Evaluate T at x in [0,1] (out-of-domain input throws).
double evaluate(const UnitFunction& t, double x);

// inf{x : T(x) >= q}, with 1 when the set is empty. Requires a nondecreasing
// T; closed-form inverses where available, otherwise bisection to 1e-12.
double quasi_inverse(const UnitFunction& t, double q);

// x -> 1 - T(x). Piecewise-linear and step kinds stay exact in their own
// representation class; parametric kinds become analytic branch closures
// (still exact, including branch inverses).
UnitFunction reflect(const UnitFunction& t);

// Step approximation on n equal cells, values sampled at cell midpoints.
UnitFunction to_grid(const UnitFunction& t, int n);

// x -> max(T(x) - delta, 0), exactly, for piecewise-linear/step/gridded
// kinds (new nodes are inserted at clamp crossings).
UnitFunction shift_down_clamp(const UnitFunction& t, double delta);

}  // namespace endomax
