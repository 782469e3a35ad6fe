#include "endomax/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "endomax/assignment.hpp"
#include "endomax/kernels.hpp"

namespace endomax {

namespace {

// Integral of clamp(v, 0, cap) dv from 0 to v (0 for v <= 0).
double clamp_antideriv(double v, double cap) {
  if (v <= 0.0) return 0.0;
  if (v <= cap) return 0.5 * v * v;
  return 0.5 * cap * cap + cap * (v - cap);
}

// Exact area of {(x,y) : e0 <= x <= e1, yb <= y <= min(yb + cap, line(x))}
// for the affine sweep from value v0 at e0 to v1 at e1.
double affine_clipped_area(double e0, double e1, double v0, double v1,
                           double yb, double cap) {
  const double len = e1 - e0;
  const double u0 = v0 - yb, u1 = v1 - yb;
  if (u0 == u1) {
    const double g = u0 <= 0.0 ? 0.0 : (u0 >= cap ? cap : u0);
    return len * g;
  }
  const double lo = std::min(u0, u1), hi = std::max(u0, u1);
  return len * (clamp_antideriv(hi, cap) - clamp_antideriv(lo, cap)) /
         (hi - lo);
}

struct ColumnPiece {
  double e0, e1;    // x-extent
  double v0, v1;    // endpoint values of T
  bool affine;
};

}  // namespace

CellWeights cell_weights(const UnitFunction& t, int n) {
  require(n >= 2 && n <= 4096, "cell_weights: n must lie in [2, 4096]");
  CellWeights w;
  w.n = n;
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  w.inner.assign(nn, 0.0);
  w.outer.assign(nn, 0.0);
  w.full.assign(nn, 0.0);
  const auto& bs = t.branches();
  const double inv = 1.0 / static_cast<double>(n);

  kernels::for_rows(n, 32L * n, [&](std::int64_t i) {
    const double c0 = static_cast<double>(i) * inv;
    const double c1 = static_cast<double>(i + 1) * inv;
    std::vector<ColumnPiece> pieces;
    double col_lo = 2.0, col_hi = -1.0;
    for (const Branch& b : bs) {
      const double o0 = std::max(b.x0, c0), o1 = std::min(b.x1, c1);
      if (!(o0 < o1)) continue;
      if (b.affine) {
        const double v0 = b.value_at(o0), v1 = b.value_at(o1);
        pieces.push_back({o0, o1, v0, v1, true});
        col_lo = std::min(col_lo, std::min(v0, v1));
        col_hi = std::max(col_hi, std::max(v0, v1));
      } else {
        // Monotone smooth: endpoint values are exact range bounds per slice.
        const int s = std::max(
            1, std::min(32, static_cast<int>(std::ceil(32.0 * (o1 - o0) / inv))));
        for (int k = 0; k < s; ++k) {
          const double e0 = o0 + (o1 - o0) * k / s;
          const double e1 = k + 1 == s ? o1 : o0 + (o1 - o0) * (k + 1) / s;
          const double v0 = b.eval(e0), v1 = b.eval(e1);
          pieces.push_back({e0, e1, v0, v1, false});
          col_lo = std::min(col_lo, std::min(v0, v1));
          col_hi = std::max(col_hi, std::max(v0, v1));
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      const double yb = static_cast<double>(j) * inv;
      const double yt = static_cast<double>(j + 1) * inv;
      double area = 0.0;
      for (const ColumnPiece& p : pieces) {
        if (p.affine) {
          area += affine_clipped_area(p.e0, p.e1, p.v0, p.v1, yb, inv);
        } else {
          // Under-estimate with the lower endpoint value: honest inner bound.
          const double lo = std::min(p.v0, p.v1) - yb;
          const double g = lo <= 0.0 ? 0.0 : (lo >= inv ? inv : lo);
          area += (p.e1 - p.e0) * g;
        }
      }
      const std::size_t idx =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(j);
      w.outer[idx] = col_hi >= yb ? 1.0 : 0.0;
      w.full[idx] = col_lo >= yt ? 1.0 : 0.0;
      double frac = clamp01(area * static_cast<double>(n) * static_cast<double>(n));
      if (w.outer[idx] == 0.0) frac = 0.0;
      if (w.full[idx] == 1.0) frac = 1.0;
      w.inner[idx] = frac;
    }
  });
  return w;
}

OracleBounds assignment_bounds(const UnitFunction& t, int n) {
  const CellWeights w = cell_weights(t, n);
  double lo = 0.0, hi = 0.0;
  const std::vector<int> slo = solve_max_assignment(w.inner, n);
  const std::vector<int> shi = solve_max_assignment(w.outer, n);
  lo = assignment_value(w.inner, n, slo) / static_cast<double>(n);
  hi = assignment_value(w.outer, n, shi) / static_cast<double>(n);
  return {clamp01(lo), clamp01(hi)};
}

OracleBounds min_assignment_bounds(const UnitFunction& t, int n) {
  const CellWeights w = cell_weights(t, n);
  const std::vector<int> slo = solve_min_assignment(w.full, n);
  const std::vector<int> shi = solve_min_assignment(w.inner, n);
  const double lo = assignment_value(w.full, n, slo) / static_cast<double>(n);
  const double hi = assignment_value(w.inner, n, shi) / static_cast<double>(n);
  return {clamp01(lo), clamp01(hi)};
}

SmallOptimum exhaustive_small(const UnitFunction& t) {
  require(t.kind() == UnitFunction::Kind::Step ||
              t.kind() == UnitFunction::Kind::Gridded,
          "exhaustive_small: transform must be step/gridded");
  const int n = static_cast<int>(t.values().size());
  require(n >= 1 && n <= 8, "exhaustive_small: at most 8 cells");
  for (double v : t.values()) {
    const double scaled = v * n;
    require(std::fabs(scaled - std::round(scaled)) < 1e-12,
            "exhaustive_small: values must sit on the (1/n)-grid");
  }
  const CellWeights w = cell_weights(t, n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  double best = -1.0, worst = 2.0;
  do {
    const double v = assignment_value(w.inner, n, perm) / static_cast<double>(n);
    best = std::max(best, v);
    worst = std::min(worst, v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, worst};
}

McResult mc_estimate(const Marginal& f, const Marginal& g,
                     const LinkFunction& s, const MeasurePreservingMap& h,
                     std::int64_t n, std::uint64_t seed) {
  require(n >= 100, "mc_estimate: need at least 100 samples");
  // One uniform draw per sample, exactly like sample_coupling.
  const std::int64_t hits = kernels::count_samples(n, seed, [&](Rng& rng) {
    const double u = rng.next_open01();
    const double x = f.quantile(u);
    const double y = g.quantile(clamp_open01(h(u)));
    return y <= s(x);
  });
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double ci = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {p, ci, n};
}

}  // namespace endomax
