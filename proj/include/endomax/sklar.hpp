// Transfer to real-valued random variables with fixed continuous marginals:
// the unit transformation T = G o S o F^-, the maximal coupling for
// P(Y <= S(X)), and reproducible sampling of couplings.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "endomax/endograph.hpp"
#include "endomax/marginal.hpp"
#include "endomax/measure_map.hpp"
#include "endomax/unit_function.hpp"

namespace endomax {

// T(x) = G(S(F^-(x))) on (0,1), with T(0) = 0 and T(1) = 1 by convention.
// Exponential/Exponential with identity link is recognized as the closed
// form exp_ratio(theta_G / theta_F); uniform marginals with identity/affine
// links produce an exact piecewise-linear T; everything else becomes
// analytic branches with exact inverse closures wherever S is invertible
// piecewise. Nondecreasing S yields a NonDecreasing flag.
UnitFunction unit_transform(const Marginal& f, const Marginal& g,
                            const LinkFunction& s);

struct CouplingResult {
  UnitFunction t;
  double mbar;
  double mlow;
  double argmin_x;  // minimizer of y - F_T(y) (the mbar witness)
  double argmax_x;  // maximizer of y - F_T(y-) (the mlow witness)
  MeasurePreservingMap h;  // optimal map: achieved mass = mbar
  double error_bound;
  std::string method;
};

// mbar = max over all couplings of P(Y <= S(X)); h realizes it via
// (X, Y) = (F^-(U), G^-(h(U))).
CouplingResult max_prob_no_early_default(const Marginal& f, const Marginal& g,
                                         const LinkFunction& s,
                                         const EndographOptions& opts = {});

// Deterministic seeded draws (x_i, y_i) = (F^-(U_i), G^-(h(U_i))). The
// sample stream is chunked with per-chunk derived seeds, so the output is
// identical for any thread count.
std::vector<std::pair<double, double>> sample_coupling(
    const Marginal& f, const Marginal& g, const MeasurePreservingMap& h,
    std::int64_t n, std::uint64_t seed);

}  // namespace endomax
