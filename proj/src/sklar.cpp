#include "endomax/sklar.hpp"

#include <algorithm>
#include <cmath>

#include "endomax/kernels.hpp"

namespace endomax {

namespace {

// One monotone real segment of S composed through the marginals: the branch
// of T over [u0, u1] on the unit scale. slope/anchor describe S restricted
// to the segment: S(v) = sy + slope * (v - sx).
Branch composed_branch(const Marginal& f, const Marginal& g, double u0,
                       double u1, double sx, double sy, double slope) {
  Branch b;
  b.x0 = u0;
  b.x1 = u1;
  b.affine = false;
  if (slope == 0.0) {
    b.dir = 0;
    b.affine = true;
    b.y0 = b.y1 = clamp01(g.cdf(sy));
    return b;
  }
  b.dir = slope > 0.0 ? 1 : -1;
  b.eval = [f, g, sx, sy, slope](double x) {
    return clamp01(g.cdf(sy + slope * (f.quantile(x) - sx)));
  };
  b.inverse = [f, g, sx, sy, slope](double y) {
    return f.cdf(sx + (g.quantile(y) - sy) / slope);
  };
  b.y0 = b.eval(u0);
  b.y1 = b.eval(u1);
  return b;
}

UnitFunction general_transform(const Marginal& f, const Marginal& g,
                               const LinkFunction& s) {
  std::vector<Branch> bs;
  if (s.kind() == LinkFunction::Kind::GriddedReal) {
    const auto& xs = s.breakpoints();
    const auto& ys = s.values();
    const double u_first = clamp01(f.cdf(xs.front()));
    const double u_last = clamp01(f.cdf(xs.back()));
    if (u_first > 0.0) {
      Branch c;
      c.x0 = 0.0;
      c.x1 = u_first;
      c.dir = 0;
      c.affine = true;
      c.y0 = c.y1 = clamp01(g.cdf(ys.front()));
      bs.push_back(c);
    }
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double u0 = clamp01(f.cdf(xs[k]));
      const double u1 = clamp01(f.cdf(xs[k + 1]));
      if (!(u0 < u1)) continue;
      const double slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
      bs.push_back(composed_branch(f, g, u0, u1, xs[k], ys[k], slope));
    }
    if (u_last < 1.0) {
      Branch c;
      c.x0 = u_last;
      c.x1 = 1.0;
      c.dir = 0;
      c.affine = true;
      c.y0 = c.y1 = clamp01(g.cdf(ys.back()));
      bs.push_back(c);
    }
  } else {
    const double slope =
        s.kind() == LinkFunction::Kind::Identity ? 1.0 : s.slope();
    const double ic =
        s.kind() == LinkFunction::Kind::Identity ? 0.0 : s.intercept();
    bs.push_back(composed_branch(f, g, 0.0, 1.0, 0.0, ic, slope));
  }
  const Monotonicity mono = s.nondecreasing() ? Monotonicity::NonDecreasing
                                              : Monotonicity::PiecewiseMonotone;
  return UnitFunction::with_unit_endpoints(
      UnitFunction::analytic(std::move(bs), mono));
}

}  // namespace

UnitFunction unit_transform(const Marginal& f, const Marginal& g,
                            const LinkFunction& s) {
  using MK = Marginal::Kind;
  using LK = LinkFunction::Kind;
  if (f.kind() == MK::Exponential && g.kind() == MK::Exponential &&
      s.kind() == LK::Identity) {
    // G(F^-(x)) = 1 - (1-x)^(rate_G / rate_F), the closed-form family.
    return UnitFunction::exp_ratio(g.rate() / f.rate());
  }
  if (f.kind() == MK::Uniform && g.kind() == MK::Uniform &&
      (s.kind() == LK::Identity || s.kind() == LK::Affine)) {
    const auto [af, bf] = f.bounds();
    const auto [ag, bg] = g.bounds();
    const double slope = s.kind() == LK::Identity ? 1.0 : s.slope();
    const double ic = s.kind() == LK::Identity ? 0.0 : s.intercept();
    const double alpha = slope * (bf - af) / (bg - ag);
    const double beta = (slope * af + ic - ag) / (bg - ag);
    if (alpha == 0.0) {
      return UnitFunction::with_unit_endpoints(
          UnitFunction::constant(clamp01(beta)));
    }
    std::vector<double> xs{0.0, 1.0};
    for (double level : {0.0, 1.0}) {
      const double xc = (level - beta) / alpha;
      if (xc > 0.0 && xc < 1.0) xs.push_back(xc);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<std::pair<double, double>> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.emplace_back(x, clamp01(alpha * x + beta));
    return UnitFunction::with_unit_endpoints(
        UnitFunction::piecewise_linear(pts));
  }
  return general_transform(f, g, s);
}

CouplingResult max_prob_no_early_default(const Marginal& f, const Marginal& g,
                                         const LinkFunction& s,
                                         const EndographOptions& opts) {
  UnitFunction t = unit_transform(f, g, s);
  OptimalMapResult om = optimal_map(t, opts);
  // Report the masses from the direct estimators on t itself; the map (and
  // its method tag) may come from a gridded rearrangement whose cdf carries
  // the extra discretization error.
  EndographReport mx = max_endograph_mass(t, opts);
  EndographReport mn = min_endograph_mass(t, opts);
  CouplingResult r{std::move(t),
                   mx.value,
                   mn.value,
                   mx.arg,
                   mn.arg,
                   std::move(om.h),
                   std::max({mx.error_bound, mn.error_bound, om.error_bound}),
                   om.method};
  return r;
}

std::vector<std::pair<double, double>> sample_coupling(
    const Marginal& f, const Marginal& g, const MeasurePreservingMap& h,
    std::int64_t n, std::uint64_t seed) {
  require(n >= 1, "sample_coupling: n must be >= 1");
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  kernels::for_samples(n, seed, [&](std::int64_t i, Rng& rng) {
    const double u = rng.next_open01();
    const double x = f.quantile(u);
    const double y = g.quantile(clamp_open01(h(u)));
    out[static_cast<std::size_t>(i)] = {x, y};
  });
  return out;
}

}  // namespace endomax
