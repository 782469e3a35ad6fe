// Independent cross-validation of the closed-form extremes.
//
// Discretize [0,1]^2 into an n x n grid. A copula restricted to the grid is
// a doubly stochastic matrix; the endograph mass is linear in it, so the
// optimum over the Birkhoff polytope is attained at a permutation and the
// Hungarian algorithm solves the discretized problem exactly. Cell weights
// bracket the true cell masses, so the resulting values bracket the true
// extreme with no additional grid slack.
#pragma once

#include <cstdint>
#include <vector>

#include "endomax/marginal.hpp"
#include "endomax/measure_map.hpp"
#include "endomax/unit_function.hpp"

namespace endomax {

struct CellWeights {
  int n = 0;
  // Row-major n*n, indexed by (x-cell i, y-cell j).
  std::vector<double> inner;  // exact or under-estimated fraction of the cell
                              // inside the endograph
  std::vector<double> outer;  // 1 iff the cell intersects the endograph
  std::vector<double> full;   // 1 iff the cell lies entirely inside

  double at(const std::vector<double>& m, int i, int j) const {
    return m[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(j)];
  }
};

// Exact sub-cell geometry on affine branches (clipped trapezoid areas);
// monotone smooth branches are cut into 32 sub-columns per cell with
// endpoint-based conservative bounds, keeping inner <= truth <= outer.
CellWeights cell_weights(const UnitFunction& t, int n);

struct OracleBounds {
  double lower;
  double upper;
};

// Bracket of mbar: max-assignment over inner (each permutation is a valid
// copula, so this is attainable) and over outer (an upper bound for every
// doubly stochastic matrix). Requires 2 <= n <= 4096.
OracleBounds assignment_bounds(const UnitFunction& t, int n);

// Bracket of mlow via cost negation: min-assignment over full (cells that
// count for every copula concentrated there) and over inner.
OracleBounds min_assignment_bounds(const UnitFunction& t, int n);

struct SmallOptimum {
  double max_value;
  double min_value;
};

// Brute force over all n! permutations for a Step/Gridded transform on
// n <= 8 cells with values on the (1/n)-grid. Agrees exactly with the
// Hungarian results on the same weights.
SmallOptimum exhaustive_small(const UnitFunction& t);

struct McResult {
  double estimate;
  double ci_halfwidth;  // 3 sigma binomial
  std::int64_t n;
};

// Empirical P(Y <= S(X)) under the coupling of h, drawn exactly like
// sample_coupling (same seed derivation, same draw pattern).
McResult mc_estimate(const Marginal& f, const Marginal& g,
                     const LinkFunction& s, const MeasurePreservingMap& h,
                     std::int64_t n, std::uint64_t seed);

}  // namespace endomax
