#pragma once

#include <cmath>
#include <cstdint>

#include "endomax/common.hpp"

namespace endomax {

struct QuadratureLimits {
  double abs_tol = 1e-8;
  std::int64_t max_evals = 1000000;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double fa, double b, double fb,
                   double m, double fm, double whole, double tol,
                   std::int64_t& evals, const QuadratureLimits& lim, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  evals += 2;
  if (evals > lim.max_evals)
    throw numerical_error("adaptive quadrature exceeded its evaluation cap");
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (!std::isfinite(delta))
    throw numerical_error("non-finite value in adaptive quadrature");
  if (depth > 0 && std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  if (depth > 60) return left + right;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, evals, lim,
                     depth + 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, evals, lim,
                     depth + 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b] with absolute tolerance. Throws numerical_error
// when the evaluation budget is exhausted before the tolerance is met.
template <class F>
double adaptive_simpson(const F& f, double a, double b,
                        QuadratureLimits lim = {}) {
  if (a == b) return 0.0;
  std::int64_t evals = 3;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, lim.abs_tol,
                             evals, lim, 0);
}

}  // namespace endomax
