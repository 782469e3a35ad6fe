// Push-forward measure machinery: the distribution function F_T of the image
// of Lebesgue measure under T, the nondecreasing rearrangement T*, and the
// measure-preserving map phi with T* o phi = T almost everywhere.
#pragma once

#include <memory>
#include <string>

#include "endomax/cdf.hpp"
#include "endomax/measure_map.hpp"
#include "endomax/unit_function.hpp"

namespace endomax {

struct CdfOptions {
  bool force_grid = false;  // route everything through the sampled fallback
  int grid_n = 10000;       // fallback resolution
};

// F_T(y) = lambda(T <= y). Exact whenever every monotone branch of T carries
// an inverse (true for all constructible kinds); otherwise the empirical cdf
// of n midpoint samples with error_bound 2/n (one stray cell per jump).
Cdf cdf_of(const UnitFunction& t, const CdfOptions& opts = {});

struct Rearrangement {
  UnitFunction tstar;            // nondecreasing rearrangement, quantile of cdf
  MeasurePreservingMap phi;      // lambda-preserving, tstar(phi(x)) = T(x) a.e.
  std::shared_ptr<const Cdf> cdf;
  double residual;   // max |tstar(phi(x)) - T(x)| over the validation grid,
                     // neighborhoods of piece boundaries excluded
  std::string method;
};

// phi is F_T o T off the atoms of the push-forward; each positive-measure
// level set T^-1{c} is mapped affinely, component by component in
// left-to-right order, onto (F_T(c-), F_T(c)]. Transformations with smooth
// non-monotone structure (other than the parabola, whose phi is closed-form)
// are gridded first; the method field records that.
Rearrangement rearrange(const UnitFunction& t, const CdfOptions& opts = {});

// Kolmogorov-Smirnov distance between the push-forward of lambda under h and
// lambda itself, from n midpoint samples. Near zero for measure-preserving h.
double verify_measure_preserving(const MeasurePreservingMap& h, int n = 4096);

}  // namespace endomax
