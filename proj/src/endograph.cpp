#include "endomax/endograph.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "endomax/quadrature.hpp"

namespace endomax {

namespace {

// Golden-section minimization of a smooth callable on [a,b].
template <class F>
std::pair<double, double> golden_min(const F& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-13; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

struct Best {
  double value = 1e300;
  double arg = 0.0;
};

void consider(Best& best, double value, double arg) {
  if (value < best.value) {
    best.value = value;
    best.arg = arg;
  }
}

// Minimize y - F(y) (sign = +1) or F-left-based -(y - F(y-)) style objective
// over the cdf. For the max-mass problem use node values F(y); for the
// min-mass problem the caller flips via the `minimize_mass` flag.
Best scan_cdf(const Cdf& f, int scan_n, bool for_max) {
  Best best;
  const auto& ns = f.nodes();
  for (const Cdf::Node& nd : ns) {
    if (for_max)
      consider(best, nd.x - nd.right, nd.x);
    else
      consider(best, -(nd.x - nd.left), nd.x);
  }
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    if (f.pieces()[i].linear) continue;  // linear gaps: node candidates win
    const double a = ns[i].x, b = ns[i + 1].x;
    const auto g = [&](double y) {
      const double v = y - f(y);
      return for_max ? v : -v;
    };
    const int s = std::max(32, static_cast<int>(std::ceil(scan_n * (b - a))));
    int kbest = -1;
    double vbest = 1e300;
    for (int k = 0; k < s; ++k) {
      const double y = a + (k + 0.5) * (b - a) / s;
      const double v = g(y);
      if (v < vbest) {
        vbest = v;
        kbest = k;
      }
    }
    const double lo = a + std::max(0.0, (kbest - 1 + 0.5)) * (b - a) / s;
    const double hi = a + std::min(static_cast<double>(s) - 0.5,
                                   (kbest + 1 + 0.5)) * (b - a) / s;
    auto [x, v] = golden_min(g, lo, hi);
    consider(best, v, x);
    consider(best, vbest, a + (kbest + 0.5) * (b - a) / s);
  }
  return best;
}

bool has_analytic_piece(const Cdf& f) {
  for (const auto& p : f.pieces())
    if (!p.linear) return true;
  return false;
}

const AffinePiece* piece_at(const std::vector<AffinePiece>& ps, double x) {
  auto it = std::upper_bound(
      ps.begin(), ps.end(), x,
      [](double v, const AffinePiece& p) { return v < p.x0; });
  const std::size_t i =
      it == ps.begin() ? 0 : static_cast<std::size_t>(it - ps.begin()) - 1;
  return &ps[i];
}

const Branch* branch_at(const std::vector<Branch>& bs, double x) {
  auto it = std::upper_bound(
      bs.begin(), bs.end(), x,
      [](double v, const Branch& b) { return v < b.x0; });
  const std::size_t i =
      it == bs.begin() ? 0 : static_cast<std::size_t>(it - bs.begin()) - 1;
  return &bs[i];
}

}  // namespace

EndographReport max_from_cdf(const Cdf& f, int scan_n) {
  const Best b = scan_cdf(f, scan_n, true);
  EndographReport r;
  r.value = clamp01(1.0 + b.value);
  r.arg = b.arg;
  r.error_bound = f.error_bound() + (has_analytic_piece(f) ? 1e-10 : 0.0);
  r.method = f.method_name();
  return r;
}

EndographReport min_from_cdf(const Cdf& f, int scan_n) {
  const Best b = scan_cdf(f, scan_n, false);
  EndographReport r;
  r.value = clamp01(-b.value);
  r.arg = b.arg;
  r.error_bound = f.error_bound() + (has_analytic_piece(f) ? 1e-10 : 0.0);
  r.method = f.method_name();
  return r;
}

EndographReport max_endograph_mass(const UnitFunction& t,
                                   const EndographOptions& opts) {
  return max_from_cdf(cdf_of(t, opts.cdf), opts.scan_n);
}

EndographReport min_endograph_mass(const UnitFunction& t,
                                   const EndographOptions& opts) {
  return min_from_cdf(cdf_of(t, opts.cdf), opts.scan_n);
}

MonotoneMax monotone_max(const UnitFunction& t, const EndographOptions& opts) {
  require(t.monotonicity() == Monotonicity::NonDecreasing,
          "monotone_max: transform must be nondecreasing");
  Best best;
  bool smooth = false;
  consider(best, t(0.0) - 0.0, 0.0);
  consider(best, t(1.0) - 1.0, 1.0);
  for (const Branch& b : t.branches()) {
    consider(best, b.y0 - b.x0, b.x0);
    consider(best, b.y1 - b.x1, b.x1);
    if (b.affine) continue;
    smooth = true;
    const auto g = [&](double x) { return b.eval(x) - x; };
    const int s =
        std::max(64, static_cast<int>(std::ceil(opts.scan_n * (b.x1 - b.x0))));
    int kbest = 0;
    double vbest = 1e300;
    for (int k = 0; k < s; ++k) {
      const double x = b.x0 + (k + 0.5) * (b.x1 - b.x0) / s;
      const double v = g(x);
      if (v < vbest) {
        vbest = v;
        kbest = k;
      }
    }
    const double lo =
        b.x0 + std::max(0.0, (kbest - 1 + 0.5)) * (b.x1 - b.x0) / s;
    const double hi = b.x0 + std::min(static_cast<double>(s) - 0.5,
                                      (kbest + 1 + 0.5)) * (b.x1 - b.x0) / s;
    auto [x, v] = golden_min(g, lo, hi);
    consider(best, v, x);
    consider(best, vbest, b.x0 + (kbest + 0.5) * (b.x1 - b.x0) / s);
  }
  MonotoneMax r{clamp01(1.0 + best.value), best.arg,
                MeasurePreservingMap::rotation(clamp01(1.0 + best.value)),
                smooth ? 1e-10 : 0.0};
  return r;
}

OptimalMapResult optimal_map(const UnitFunction& t,
                             const EndographOptions& opts) {
  Rearrangement r = rearrange(t, opts.cdf);
  EndographReport m = max_from_cdf(*r.cdf, opts.scan_n);
  MeasurePreservingMap h = MeasurePreservingMap::composite(
      {r.phi, MeasurePreservingMap::rotation(m.value)});
  OptimalMapResult out{std::move(h), m.value,   m.arg,
                       m.error_bound, r.method, std::move(r)};
  return out;
}

MassResult achieved_mass(const MeasurePreservingMap& h, const UnitFunction& t) {
  const std::vector<AffinePiece> hp = h.affine_pieces();
  const std::vector<Branch>& tb = t.branches();
  std::vector<double> cuts;
  cuts.reserve(hp.size() + tb.size() + 1);
  for (const AffinePiece& p : hp) cuts.push_back(p.x0);
  for (const Branch& b : tb) cuts.push_back(b.x0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double acc = 0.0;
  bool all_exact = true;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double s0 = cuts[k], s1 = cuts[k + 1];
    if (!(s0 < s1)) continue;
    const double xm = 0.5 * (s0 + s1);
    const AffinePiece* p = piece_at(hp, xm);
    const Branch* b = branch_at(tb, xm);
    if (b->affine) {
      // d(x) = h(x) - T(x) is affine here; mass where d <= 0 is closed-form.
      double alpha = 0.0, beta = b->y0;
      if (b->dir != 0) {
        alpha = (b->y1 - b->y0) / (b->x1 - b->x0);
        beta = b->y0 - alpha * b->x0;
      }
      const double da = p->a - alpha, db = p->b - beta;
      const double d0 = da * s0 + db, d1 = da * s1 + db;
      if (d0 <= 0.0 && d1 <= 0.0) {
        acc += s1 - s0;
      } else if (d0 > 0.0 && d1 > 0.0) {
        // nothing inside
      } else {
        const double xc = -db / da;
        acc += d0 <= 0.0 ? xc - s0 : s1 - xc;
      }
    } else {
      all_exact = false;
      const auto d = [&](double x) { return p->eval(x) - b->eval(x); };
      const int m = 1024;
      const double step = (s1 - s0) / m;
      double xprev = s0, dprev = d(s0);
      for (int i = 1; i <= m; ++i) {
        const double x = i == m ? s1 : s0 + i * step;
        const double dx = d(x);
        if (dprev <= 0.0 && dx <= 0.0) {
          acc += x - xprev;
        } else if (dprev > 0.0 && dx > 0.0) {
          // outside
        } else {
          double lo = xprev, hi = x;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((d(mid) <= 0.0) == (dprev <= 0.0))
              lo = mid;
            else
              hi = mid;
          }
          const double xr = 0.5 * (lo + hi);
          acc += dprev <= 0.0 ? xr - xprev : x - xr;
        }
        xprev = x;
        dprev = dx;
      }
    }
  }
  MassResult r;
  r.value = clamp01(acc);
  r.error_bound = all_exact ? 0.0 : 1e-9;
  r.method = all_exact ? "exact" : "refined(1024)";
  return r;
}

EpsilonMinResult epsilon_min_map(const UnitFunction& t, double eps,
                                 const EndographOptions& opts) {
  require(std::isfinite(eps) && eps > 0.0 && eps < 1.0,
          "epsilon_min_map: eps must lie in (0,1)");
  const double delta = 0.5 * eps;
  UnitFunction u = reflect(t);
  std::string method = "exact";
  switch (u.kind()) {
    case UnitFunction::Kind::PiecewiseLinear:
    case UnitFunction::Kind::Step:
    case UnitFunction::Kind::Gridded:
      break;
    default: {
      const int n = std::max(8192, static_cast<int>(std::ceil(32.0 / eps)));
      u = to_grid(u, n);
      method = "grid(" + std::to_string(n) + ")";
      break;
    }
  }
  UnitFunction ud = shift_down_clamp(u, delta);
  OptimalMapResult g = optimal_map(ud, opts);
  MeasurePreservingMap h = MeasurePreservingMap::composite(
      {std::move(g.h), MeasurePreservingMap::reflect()});
  return {std::move(h), eps, delta,
          method == "exact" ? g.method : method + "; " + g.method};
}

MassResult max_graph_mass_monotone(const UnitFunction& t) {
  require(t.monotonicity() == Monotonicity::NonDecreasing,
          "max_graph_mass_monotone: transform must be nondecreasing");
  double total = 0.0;
  bool exact = true;
  QuadratureLimits lim;
  lim.abs_tol = 1e-9;
  for (const Branch& b : t.branches()) {
    require(b.dir != 0,
            "max_graph_mass_monotone: push-forward has an atom (constant "
            "piece); the graph-mass formula needs an atomless push-forward");
    if (b.affine) {
      const double s = (b.y1 - b.y0) / (b.x1 - b.x0);
      total += (b.x1 - b.x0) * std::min(1.0, s);
      continue;
    }
    require(b.deriv != nullptr,
            "max_graph_mass_monotone: smooth piece without derivative");
    exact = false;
    const auto f = [&](double x) { return std::min(1.0, b.deriv(x)); };
    // Split at crossings of T' = 1 so each Simpson call sees a smooth cap.
    std::vector<double> seg{b.x0};
    const int s = 64;
    double xprev = b.x0, gprev = b.deriv(xprev) - 1.0;
    for (int k = 1; k <= s; ++k) {
      const double x = k == s ? b.x1 : b.x0 + k * (b.x1 - b.x0) / s;
      const double g = b.deriv(x) - 1.0;
      if ((gprev > 0.0) != (g > 0.0)) {
        double lo = xprev, hi = x;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((b.deriv(mid) - 1.0 > 0.0) == (gprev > 0.0))
            lo = mid;
          else
            hi = mid;
        }
        seg.push_back(0.5 * (lo + hi));
      }
      xprev = x;
      gprev = g;
    }
    seg.push_back(b.x1);
    for (std::size_t k = 0; k + 1 < seg.size(); ++k)
      total += adaptive_simpson(f, seg[k], seg[k + 1], lim);
  }
  MassResult r;
  r.value = clamp01(total);
  r.error_bound = exact ? 0.0 : 1e-8;
  r.method = exact ? "exact" : "quadrature";
  return r;
}

}  // namespace endomax
