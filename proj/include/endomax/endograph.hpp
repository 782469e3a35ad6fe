// Extremal copula mass on the endograph {(x,y) : y <= T(x)}.
//
// The maximum is 1 + min_y (y - F_T(y)) and is attained by the completely
// dependent copula of h = rotation(mbar) o phi, phi the rearrangement map.
// The minimum is max_y (y - F_T(y-)); it need not be attained, so builders
// return eps-optimal maps via the reflection construction.
#pragma once

#include <string>

#include "endomax/measure_map.hpp"
#include "endomax/pushforward.hpp"
#include "endomax/unit_function.hpp"

namespace endomax {

struct EndographOptions {
  CdfOptions cdf;
  int scan_n = 10000;  // candidate points per unit length on smooth pieces
};

struct EndographReport {
  double value;        // mbar or mlow
  double arg;          // extremizing point on the value axis
  double error_bound;  // inherited from the cdf plus refinement slack
  std::string method;
};

// mbar = 1 + min_y (y - F_T(y)); arg is the minimizing y.
EndographReport max_endograph_mass(const UnitFunction& t,
                                   const EndographOptions& opts = {});
// Same, evaluated on an already-computed cdf.
EndographReport max_from_cdf(const Cdf& f, int scan_n = 10000);

// mlow = max_y (y - F_T(y-)); arg is the maximizing y. Equals
// 1 - max_endograph_mass(reflect(t)) up to error bounds.
EndographReport min_endograph_mass(const UnitFunction& t,
                                   const EndographOptions& opts = {});
EndographReport min_from_cdf(const Cdf& f, int scan_n = 10000);

// Nondecreasing shortcut: mbar = 1 + inf_x (T(x) - x), no cdf needed, and
// the rotation by mbar alone is optimal.
struct MonotoneMax {
  double mbar;
  double arg;  // x attaining the infimum (up to refinement tolerance)
  MeasurePreservingMap rotation;
  double error_bound;
};
MonotoneMax monotone_max(const UnitFunction& t,
                         const EndographOptions& opts = {});

// h = composite(phi, rotation(mbar)) with both factors from the same cdf.
struct OptimalMapResult {
  MeasurePreservingMap h;
  double mbar;
  double arg;
  double error_bound;
  std::string method;
  Rearrangement rearrangement;
};
OptimalMapResult optimal_map(const UnitFunction& t,
                             const EndographOptions& opts = {});

// lambda{x : h(x) <= T(x)}, the endograph mass of the completely dependent
// copula of h. Exact when T is piecewise affine; smooth pieces are resolved
// by dense sampling plus sign-change bisection.
struct MassResult {
  double value;
  double error_bound;
  std::string method;
};
MassResult achieved_mass(const MeasurePreservingMap& h, const UnitFunction& t);

// eps-optimal minimizer: U = reflect(T) shifted down by delta = eps/2 and
// clamped, g = optimal_map(U_delta), h = reflect o g. Guarantees
// achieved_mass(h, T) <= mlow + eps.
struct EpsilonMinResult {
  MeasurePreservingMap h;
  double eps;
  double delta;
  std::string method;
};
EpsilonMinResult epsilon_min_map(const UnitFunction& t, double eps,
                                 const EndographOptions& opts = {});

// Maximal mass on the graph {y = T(x)} for nondecreasing T with atomless
// push-forward: integral of min(1, T'(x)). Requires derivative closures (or
// affine pieces); rejects transformations whose push-forward has atoms.
MassResult max_graph_mass_monotone(const UnitFunction& t);

}  // namespace endomax
