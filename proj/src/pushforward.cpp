#include "endomax/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace endomax {

namespace {

// Shared state for the closures of an exactly computed cdf.
struct ExactData {
  std::vector<double> atom_x;    // sorted atom values
  std::vector<double> atom_cum;  // inclusive prefix masses
  std::vector<Branch> movers;    // non-constant branches
};

// lambda{x in branch : T(x) <= y}.
double portion(const Branch& b, double y) {
  const double lo = std::min(b.y0, b.y1);
  const double hi = std::max(b.y0, b.y1);
  const double len = b.x1 - b.x0;
  if (y < lo) return 0.0;
  if (y >= hi) return len;
  if (b.affine) {
    return b.dir > 0 ? len * (y - b.y0) / (b.y1 - b.y0)
                     : len * (b.y1 - y) / (b.y1 - b.y0);
  }
  double x = b.inverse(y);
  if (x < b.x0) x = b.x0;
  if (x > b.x1) x = b.x1;
  return b.dir > 0 ? x - b.x0 : b.x1 - x;
}

double atoms_leq(const ExactData& d, double y) {
  auto it = std::upper_bound(d.atom_x.begin(), d.atom_x.end(), y);
  if (it == d.atom_x.begin()) return 0.0;
  return d.atom_cum[static_cast<std::size_t>(it - d.atom_x.begin()) - 1];
}

double atoms_lt(const ExactData& d, double y) {
  auto it = std::lower_bound(d.atom_x.begin(), d.atom_x.end(), y);
  if (it == d.atom_x.begin()) return 0.0;
  return d.atom_cum[static_cast<std::size_t>(it - d.atom_x.begin()) - 1];
}

double eval_exact(const ExactData& d, double y) {
  double s = atoms_leq(d, y);
  for (const Branch& b : d.movers) s += portion(b, y);
  return s;
}

Cdf exact_cdf(const UnitFunction& t) {
  auto data = std::make_shared<ExactData>();
  std::map<double, double> atom_map;
  std::vector<double> ys{0.0, 1.0};
  for (const Branch& b : t.branches()) {
    if (b.dir == 0) {
      atom_map[b.y0] += b.x1 - b.x0;
      ys.push_back(b.y0);
    } else {
      data->movers.push_back(b);
      ys.push_back(std::min(b.y0, b.y1));
      ys.push_back(std::max(b.y0, b.y1));
    }
  }
  double cum = 0.0;
  for (const auto& [v, m] : atom_map) {
    data->atom_x.push_back(v);
    cum += m;
    data->atom_cum.push_back(cum);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::vector<Cdf::Node> nodes;
  nodes.reserve(ys.size());
  for (double y : ys) {
    double left = atoms_lt(*data, y);
    double right = atoms_leq(*data, y);
    for (const Branch& b : data->movers) {
      const double p = portion(b, y);
      left += p;
      right += p;
    }
    nodes.push_back({y, clamp01(left), clamp01(right)});
  }
  // Tidy accumulated roundoff: monotone across the table, exact endpoints.
  double run = 0.0;
  for (Cdf::Node& nd : nodes) {
    nd.left = std::max(nd.left, run);
    nd.right = std::max(nd.right, nd.left);
    run = nd.right;
  }
  nodes.front().left = 0.0;
  nodes.back().right = 1.0;
  nodes.back().left = std::min(nodes.back().left, 1.0);

  std::vector<Cdf::Piece> pieces(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i].x, b = nodes[i + 1].x;
    bool analytic = false;
    for (const Branch& m : data->movers) {
      if (m.affine) continue;
      if (std::min(m.y0, m.y1) < b && std::max(m.y0, m.y1) > a) {
        analytic = true;
        break;
      }
    }
    if (analytic) {
      pieces[i].linear = false;
      pieces[i].eval = [data](double y) { return clamp01(eval_exact(*data, y)); };
    }
  }
  return Cdf(std::move(nodes), std::move(pieces), Cdf::Method::Exact, 0.0);
}

Cdf grid_cdf(const UnitFunction& t, int n) {
  require(n >= 2, "cdf_of: grid_n must be >= 2");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] = t((i + 0.5) / static_cast<double>(n));
  std::sort(v.begin(), v.end());
  std::vector<Cdf::Node> nodes;
  if (v.front() > 0.0) nodes.push_back({0.0, 0.0, 0.0});
  std::size_t i = 0;
  const auto nn = static_cast<double>(n);
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    nodes.push_back({v[i], static_cast<double>(i) / nn,
                     static_cast<double>(j) / nn});
    i = j;
  }
  if (nodes.back().x < 1.0)
    nodes.push_back({1.0, 1.0, 1.0});
  else
    nodes.back().right = 1.0;
  return Cdf(std::move(nodes), {}, Cdf::Method::Grid, 2.0 / nn, n);
}

// F o T on one affine branch, cut at the cdf's nodes so every sub-piece is
// an exact affine composition.
void append_f_of_t(const Cdf& f, const Branch& b,
                   std::vector<AffinePiece>& out) {
  const double alpha = (b.y1 - b.y0) / (b.x1 - b.x0);
  const double beta = b.y0 - alpha * b.x0;
  const double lo = std::min(b.y0, b.y1), hi = std::max(b.y0, b.y1);
  std::vector<double> cuts{b.x0, b.x1};
  for (const Cdf::Node& nd : f.nodes()) {
    if (nd.x > lo && nd.x < hi) {
      const double xc = (nd.x - beta) / alpha;
      if (xc > b.x0 && xc < b.x1) cuts.push_back(xc);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const auto& ns = f.nodes();
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (!(cuts[k] < cuts[k + 1])) continue;
    const double xm = 0.5 * (cuts[k] + cuts[k + 1]);
    const double tm = alpha * xm + beta;
    auto it = std::upper_bound(
        ns.begin(), ns.end(), tm,
        [](double v, const Cdf::Node& nd) { return v < nd.x; });
    const std::size_t j = static_cast<std::size_t>(it - ns.begin()) - 1;
    if (j + 1 >= ns.size() || !f.pieces()[j].linear)
      throw numerical_error("rearrange: non-linear cdf piece on an affine branch");
    const double gamma =
        (ns[j + 1].left - ns[j].right) / (ns[j + 1].x - ns[j].x);
    const double delta = ns[j].right - gamma * ns[j].x;
    out.push_back({cuts[k], cuts[k + 1], gamma * alpha, gamma * beta + delta});
  }
}

}  // namespace

Cdf cdf_of(const UnitFunction& t, const CdfOptions& opts) {
  if (!opts.force_grid) {
    if (t.kind() == UnitFunction::Kind::Quantile) return *t.source_cdf();
    bool invertible = true;
    for (const Branch& b : t.branches())
      if (!b.invertible()) {
        invertible = false;
        break;
      }
    if (invertible) return exact_cdf(t);
  }
  return grid_cdf(t, opts.grid_n);
}

Rearrangement rearrange(const UnitFunction& t, const CdfOptions& opts) {
  bool smooth_nonmono = false;
  if (t.monotonicity() != Monotonicity::NonDecreasing &&
      t.kind() != UnitFunction::Kind::Parabola) {
    for (const Branch& b : t.branches())
      if (!b.affine) {
        smooth_nonmono = true;
        break;
      }
  }
  UnitFunction base = t;
  std::string method;
  if (opts.force_grid || smooth_nonmono) {
    base = to_grid(t, opts.grid_n);
    method = "grid(" + std::to_string(opts.grid_n) + ")";
  }
  auto cdf = std::make_shared<const Cdf>(cdf_of(base));
  if (method.empty()) method = cdf->method_name();
  UnitFunction tstar = UnitFunction::quantile_of(cdf);

  std::vector<AffinePiece> pieces;
  int level_count = 0;
  if (base.kind() == UnitFunction::Kind::Parabola) {
    pieces = {{0.0, 0.5, -2.0, 1.0}, {0.5, 1.0, 2.0, -1.0}};
  } else {
    const bool nondec = base.monotonicity() == Monotonicity::NonDecreasing;
    std::map<double, double> used;  // level value -> mass already ranked
    for (const Branch& b : base.branches()) {
      if (b.dir == 0) {
        auto [it, fresh] = used.emplace(b.y0, 0.0);
        if (fresh) ++level_count;
        const double start = cdf->left_limit(b.y0) + it->second;
        pieces.push_back({b.x0, b.x1, 1.0, start - b.x0});
        it->second += b.x1 - b.x0;
      } else if (nondec) {
        pieces.push_back({b.x0, b.x1, 1.0, 0.0});
      } else {
        append_f_of_t(*cdf, b, pieces);
      }
    }
  }
  const bool phi_is_identity =
      std::all_of(pieces.begin(), pieces.end(), [](const AffinePiece& p) {
        return p.a == 1.0 && p.b == 0.0;
      });
  MeasurePreservingMap phi =
      phi_is_identity
          ? MeasurePreservingMap::identity()
          : MeasurePreservingMap::level_spread(
                std::move(pieces),
                level_count > 0 ? std::to_string(level_count) + " level sets"
                                : "");

  // Residual on the validation grid, away from piece boundaries.
  const int m = 10000;
  std::vector<double> bounds;
  for (const AffinePiece& p : phi.affine_pieces()) bounds.push_back(p.x0);
  for (const Branch& b : t.branches()) bounds.push_back(b.x0);
  bounds.push_back(1.0);
  std::sort(bounds.begin(), bounds.end());
  const double radius = 2.0 / m;
  double residual = 0.0;
  for (int k = 0; k < m; ++k) {
    const double x = (k + 0.5) / static_cast<double>(m);
    auto it = std::lower_bound(bounds.begin(), bounds.end(), x);
    const double dn = it == bounds.end() ? 2.0 : *it - x;
    const double dp = it == bounds.begin() ? 2.0 : x - *(it - 1);
    if (std::min(dn, dp) < radius) continue;
    residual = std::max(residual, std::fabs(tstar(phi(x)) - t(x)));
  }

  return Rearrangement{std::move(tstar), std::move(phi), std::move(cdf),
                       residual, std::move(method)};
}

double verify_measure_preserving(const MeasurePreservingMap& h, int n) {
  require(n >= 2, "verify_measure_preserving: n must be >= 2");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] = h((i + 0.5) / static_cast<double>(n));
  std::sort(v.begin(), v.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(v[static_cast<std::size_t>(i)] - lo),
                             std::fabs(v[static_cast<std::size_t>(i)] - hi)));
  }
  return d;
}

}  // namespace endomax
