#include "endomax/unit_function.hpp"

#include <algorithm>
#include <cmath>

#include "endomax/cdf.hpp"

namespace endomax {

namespace {

double interp(double x0, double y0, double x1, double y1, double x) {
  return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

void check_unit_value(double v, const char* what) {
  require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
          std::string(what) + " must lie in [0,1]");
}

Monotonicity pl_monotonicity(const std::vector<PlNode>& ns) {
  bool nondec = true;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    if (ns[i].left > ns[i].right || ns[i].right > ns[i + 1].left) {
      nondec = false;
      break;
    }
  }
  if (nondec && ns.back().left <= ns.back().right) return Monotonicity::NonDecreasing;
  return Monotonicity::PiecewiseMonotone;
}

int sign_of(double a, double b) {
  if (a < b) return 1;
  if (a > b) return -1;
  return 0;
}

std::vector<Branch> pl_branches(const std::vector<PlNode>& ns) {
  std::vector<Branch> out;
  out.reserve(ns.size() - 1);
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    Branch b;
    b.x0 = ns[i].x;
    b.x1 = ns[i + 1].x;
    b.y0 = ns[i].right;
    b.y1 = ns[i + 1].left;
    b.dir = sign_of(b.y0, b.y1);
    b.affine = true;
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Branch> step_branches(const std::vector<double>& vals) {
  const int k = static_cast<int>(vals.size());
  std::vector<Branch> out;
  out.reserve(vals.size());
  for (int i = 0; i < k; ++i) {
    Branch b;
    b.x0 = static_cast<double>(i) / k;
    b.x1 = static_cast<double>(i + 1) / k;
    b.y0 = b.y1 = vals[static_cast<std::size_t>(i)];
    b.dir = 0;
    b.affine = true;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

double Branch::value_at(double x) const {
  if (affine) {
    if (dir == 0) return y0;
    return interp(x0, y0, x1, y1, x);
  }
  return eval(x);
}

UnitFunction UnitFunction::piecewise_linear(std::vector<PlNode> nodes) {
  require(nodes.size() >= 2, "piecewise_linear: need at least two nodes");
  require(nodes.front().x == 0.0 && nodes.back().x == 1.0,
          "piecewise_linear: nodes must span [0,1]");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_unit_value(nodes[i].left, "piecewise_linear node value");
    check_unit_value(nodes[i].right, "piecewise_linear node value");
    if (i > 0)
      require(nodes[i - 1].x < nodes[i].x,
              "piecewise_linear: node x must be strictly increasing");
  }
  UnitFunction t;
  t.kind_ = Kind::PiecewiseLinear;
  t.nodes_ = std::move(nodes);
  t.mono_ = pl_monotonicity(t.nodes_);
  t.branches_ =
      std::make_shared<const std::vector<Branch>>(pl_branches(t.nodes_));
  return t;
}

UnitFunction UnitFunction::piecewise_linear(
    const std::vector<std::pair<double, double>>& points) {
  std::vector<PlNode> ns;
  ns.reserve(points.size());
  for (const auto& [x, y] : points) ns.push_back({x, y, y});
  return piecewise_linear(std::move(ns));
}

UnitFunction UnitFunction::step(std::vector<double> values) {
  require(!values.empty(), "step: need at least one cell");
  for (double v : values) check_unit_value(v, "step value");
  UnitFunction t;
  t.kind_ = Kind::Step;
  t.values_ = std::move(values);
  t.mono_ = std::is_sorted(t.values_.begin(), t.values_.end())
                ? Monotonicity::NonDecreasing
                : Monotonicity::PiecewiseMonotone;
  t.branches_ =
      std::make_shared<const std::vector<Branch>>(step_branches(t.values_));
  return t;
}

UnitFunction UnitFunction::gridded(std::vector<double> values) {
  UnitFunction t = step(std::move(values));
  t.kind_ = Kind::Gridded;
  return t;
}

UnitFunction UnitFunction::exp_ratio(double theta) {
  require(std::isfinite(theta) && theta > 0.0, "exp_ratio: theta must be > 0");
  UnitFunction t;
  t.kind_ = Kind::ExpRatio;
  t.theta_ = theta;
  t.mono_ = Monotonicity::NonDecreasing;
  Branch b;
  b.x0 = 0.0;
  b.x1 = 1.0;
  b.y0 = 0.0;
  b.y1 = 1.0;
  b.dir = 1;
  b.affine = false;
  b.eval = [theta](double x) { return 1.0 - std::pow(1.0 - x, theta); };
  b.inverse = [theta](double y) { return 1.0 - std::pow(1.0 - y, 1.0 / theta); };
  b.deriv = [theta](double x) { return theta * std::pow(1.0 - x, theta - 1.0); };
  t.branches_ = std::make_shared<const std::vector<Branch>>(
      std::vector<Branch>{std::move(b)});
  return t;
}

UnitFunction UnitFunction::ex_gegen(int n) {
  require(n >= 1, "ex_gegen: n must be >= 1");
  UnitFunction t;
  t.kind_ = Kind::ExGegen;
  t.n_ = n;
  t.mono_ = Monotonicity::NonDecreasing;
  const double e = 1.0 / static_cast<double>(n);
  std::vector<Branch> bs(3);
  bs[0] = Branch{0.0, 0.5, 0.0, 0.25, 1, true, nullptr, nullptr, nullptr};
  Branch mid;
  mid.x0 = 0.5;
  mid.x1 = 0.75;
  mid.y0 = 0.25;
  mid.y1 = 0.5;
  mid.dir = 1;
  mid.affine = false;
  mid.eval = [e](double x) { return 0.25 + 0.25 * std::pow(4.0 * x - 2.0, e); };
  mid.inverse = [n](double y) {
    return 0.25 * (std::pow(4.0 * y - 1.0, static_cast<double>(n)) + 2.0);
  };
  mid.deriv = [e](double x) { return e * std::pow(4.0 * x - 2.0, e - 1.0); };
  bs[1] = std::move(mid);
  bs[2] = Branch{0.75, 1.0, 0.5, 1.0, 1, true, nullptr, nullptr, nullptr};
  t.branches_ = std::make_shared<const std::vector<Branch>>(std::move(bs));
  return t;
}

UnitFunction UnitFunction::parabola() {
  UnitFunction t;
  t.kind_ = Kind::Parabola;
  t.mono_ = Monotonicity::PiecewiseMonotone;
  auto eval = [](double x) {
    const double d = x - 0.5;
    return 4.0 * d * d;
  };
  std::vector<Branch> bs(2);
  bs[0].x0 = 0.0;
  bs[0].x1 = 0.5;
  bs[0].y0 = 1.0;
  bs[0].y1 = 0.0;
  bs[0].dir = -1;
  bs[0].affine = false;
  bs[0].eval = eval;
  bs[0].inverse = [](double y) { return 0.5 - 0.5 * std::sqrt(y); };
  bs[0].deriv = [](double x) { return 8.0 * (x - 0.5); };
  bs[1].x0 = 0.5;
  bs[1].x1 = 1.0;
  bs[1].y0 = 0.0;
  bs[1].y1 = 1.0;
  bs[1].dir = 1;
  bs[1].affine = false;
  bs[1].eval = eval;
  bs[1].inverse = [](double y) { return 0.5 + 0.5 * std::sqrt(y); };
  bs[1].deriv = [](double x) { return 8.0 * (x - 0.5); };
  t.branches_ = std::make_shared<const std::vector<Branch>>(std::move(bs));
  return t;
}

UnitFunction UnitFunction::identity() {
  return piecewise_linear(
      std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 1.0}});
}

UnitFunction UnitFunction::constant(double c) { return step({c}); }

UnitFunction UnitFunction::quantile_of(std::shared_ptr<const Cdf> cdf) {
  require(cdf != nullptr, "quantile_of: null cdf");
  UnitFunction t;
  t.kind_ = Kind::Quantile;
  t.mono_ = Monotonicity::NonDecreasing;
  t.cdf_ = std::move(cdf);
  t.branches_ = std::make_shared<const std::vector<Branch>>(
      quantile_branches(*t.cdf_));
  return t;
}

UnitFunction UnitFunction::analytic(std::vector<Branch> branches,
                                    Monotonicity mono) {
  require(!branches.empty(), "analytic: need branches");
  require(branches.front().x0 == 0.0 && branches.back().x1 == 1.0,
          "analytic: branches must span [0,1]");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    require(branches[i].x0 < branches[i].x1,
            "analytic: degenerate branch interval");
    if (i > 0)
      require(branches[i - 1].x1 == branches[i].x0,
              "analytic: branches must be contiguous");
    require(branches[i].affine || branches[i].eval != nullptr,
            "analytic: non-affine branch needs an evaluator");
  }
  UnitFunction t;
  t.kind_ = Kind::Analytic;
  t.mono_ = mono;
  t.branches_ =
      std::make_shared<const std::vector<Branch>>(std::move(branches));
  return t;
}

UnitFunction UnitFunction::with_unit_endpoints(UnitFunction base) {
  if (base(0.0) != 0.0) base.pin0_ = true;
  if (base(1.0) != 1.0) base.pin1_ = true;
  return base;
}

double UnitFunction::operator()(double x) const {
  require(x >= 0.0 && x <= 1.0, "evaluate: x must lie in [0,1]");
  if (pin0_ && x == 0.0) return 0.0;
  if (pin1_ && x == 1.0) return 1.0;
  switch (kind_) {
    case Kind::PiecewiseLinear: {
      const auto& ns = nodes_;
      if (x == 1.0) return ns.back().right;
      auto it = std::upper_bound(
          ns.begin(), ns.end(), x,
          [](double v, const PlNode& nd) { return v < nd.x; });
      const std::size_t i = static_cast<std::size_t>(it - ns.begin()) - 1;
      if (ns[i].x == x) return ns[i].right;
      return interp(ns[i].x, ns[i].right, ns[i + 1].x, ns[i + 1].left, x);
    }
    case Kind::Step:
    case Kind::Gridded: {
      const std::size_t k = values_.size();
      std::size_t i = static_cast<std::size_t>(x * static_cast<double>(k));
      if (i >= k) i = k - 1;
      return values_[i];
    }
    case Kind::ExpRatio:
      return 1.0 - std::pow(1.0 - x, theta_);
    case Kind::ExGegen: {
      if (x <= 0.5) return 0.5 * x;
      if (x < 0.75)
        return 0.25 + 0.25 * std::pow(4.0 * x - 2.0, 1.0 / n_);
      return 2.0 * x - 1.0;
    }
    case Kind::Parabola: {
      const double d = x - 0.5;
      return 4.0 * d * d;
    }
    case Kind::Quantile:
      return cdf_->quantile(x);
    case Kind::Analytic: {
      const auto& bs = *branches_;
      auto it = std::upper_bound(
          bs.begin(), bs.end(), x,
          [](double v, const Branch& b) { return v < b.x0; });
      const std::size_t i =
          it == bs.begin() ? 0 : static_cast<std::size_t>(it - bs.begin()) - 1;
      return clamp01(bs[i].value_at(x));
    }
  }
  return 0.0;  // unreachable
}

double UnitFunction::theta() const {
  require(kind_ == Kind::ExpRatio, "theta: not an exp_ratio transform");
  return theta_;
}

int UnitFunction::n_param() const {
  require(kind_ == Kind::ExGegen, "n_param: not an ex_gegen transform");
  return n_;
}

const std::vector<PlNode>& UnitFunction::nodes() const {
  require(kind_ == Kind::PiecewiseLinear, "nodes: not piecewise linear");
  return nodes_;
}

const std::vector<double>& UnitFunction::values() const {
  require(kind_ == Kind::Step || kind_ == Kind::Gridded,
          "values: not a step/gridded transform");
  return values_;
}

std::shared_ptr<const Cdf> UnitFunction::source_cdf() const {
  require(kind_ == Kind::Quantile, "source_cdf: not a quantile transform");
  return cdf_;
}

const std::vector<Branch>& UnitFunction::branches() const { return *branches_; }

bool UnitFunction::is_identity() const {
  if (kind_ != Kind::PiecewiseLinear) return false;
  for (const PlNode& nd : nodes_) {
    if (nd.left != nd.x || nd.right != nd.x) return false;
  }
  return true;
}

double evaluate(const UnitFunction& t, double x) { return t(x); }

double quasi_inverse(const UnitFunction& t, double q) {
  require(q >= 0.0 && q <= 1.0, "quasi_inverse: q must lie in [0,1]");
  require(t.monotonicity() == Monotonicity::NonDecreasing,
          "quasi_inverse: transform must be nondecreasing");
  for (const Branch& b : t.branches()) {
    if (b.dir == 0) {
      if (b.y0 >= q) return b.x0;
      continue;
    }
    if (b.y0 >= q) return b.x0;
    if (b.y1 < q) continue;
    // Value is reached inside this increasing piece.
    if (b.affine) {
      return b.x0 + (q - b.y0) * (b.x1 - b.x0) / (b.y1 - b.y0);
    }
    if (b.inverse) {
      double x = b.inverse(q);
      if (x < b.x0) x = b.x0;
      if (x > b.x1) x = b.x1;
      return x;
    }
    double lo = b.x0, hi = b.x1;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (b.eval(mid) >= q)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }
  if (t(1.0) >= q) return 1.0;
  return 1.0;  // set empty
}

UnitFunction reflect(const UnitFunction& t) {
  switch (t.kind()) {
    case UnitFunction::Kind::PiecewiseLinear: {
      std::vector<PlNode> ns = t.nodes();
      for (PlNode& nd : ns) {
        nd.left = 1.0 - nd.left;
        nd.right = 1.0 - nd.right;
      }
      return UnitFunction::piecewise_linear(std::move(ns));
    }
    case UnitFunction::Kind::Step:
    case UnitFunction::Kind::Gridded: {
      std::vector<double> vs = t.values();
      for (double& v : vs) v = 1.0 - v;
      return t.kind() == UnitFunction::Kind::Step
                 ? UnitFunction::step(std::move(vs))
                 : UnitFunction::gridded(std::move(vs));
    }
    default: {
      std::vector<Branch> out;
      out.reserve(t.branches().size());
      for (const Branch& b : t.branches()) {
        Branch r;
        r.x0 = b.x0;
        r.x1 = b.x1;
        r.y0 = 1.0 - b.y0;
        r.y1 = 1.0 - b.y1;
        r.dir = -b.dir;
        r.affine = b.affine;
        if (!b.affine) {
          r.eval = [e = b.eval](double x) { return 1.0 - e(x); };
        }
        if (b.inverse) {
          r.inverse = [inv = b.inverse](double y) { return inv(1.0 - y); };
        }
        if (b.deriv) {
          r.deriv = [d = b.deriv](double x) { return -d(x); };
        }
        out.push_back(std::move(r));
      }
      Monotonicity mono = t.monotonicity() == Monotonicity::General
                              ? Monotonicity::General
                              : Monotonicity::PiecewiseMonotone;
      return UnitFunction::analytic(std::move(out), mono);
    }
  }
}

UnitFunction to_grid(const UnitFunction& t, int n) {
  require(n >= 1, "to_grid: n must be >= 1");
  std::vector<double> vs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    vs[static_cast<std::size_t>(i)] = t((i + 0.5) / static_cast<double>(n));
  return UnitFunction::gridded(std::move(vs));
}

UnitFunction shift_down_clamp(const UnitFunction& t, double delta) {
  require(std::isfinite(delta) && delta >= 0.0,
          "shift_down_clamp: delta must be >= 0");
  const auto drop = [delta](double v) {
    const double w = v - delta;
    return w > 0.0 ? w : 0.0;
  };
  switch (t.kind()) {
    case UnitFunction::Kind::Step:
    case UnitFunction::Kind::Gridded: {
      std::vector<double> vs = t.values();
      for (double& v : vs) v = drop(v);
      return t.kind() == UnitFunction::Kind::Step
                 ? UnitFunction::step(std::move(vs))
                 : UnitFunction::gridded(std::move(vs));
    }
    case UnitFunction::Kind::PiecewiseLinear: {
      const auto& ns = t.nodes();
      std::vector<PlNode> out;
      out.reserve(ns.size() + 4);
      for (std::size_t i = 0; i < ns.size(); ++i) {
        out.push_back({ns[i].x, drop(ns[i].left), drop(ns[i].right)});
        if (i + 1 == ns.size()) break;
        // Insert the clamp crossing when the segment straddles the level.
        const double a = ns[i].right, b = ns[i + 1].left;
        if ((a - delta) * (b - delta) < 0.0) {
          const double xc =
              ns[i].x + (delta - a) * (ns[i + 1].x - ns[i].x) / (b - a);
          if (xc > ns[i].x && xc < ns[i + 1].x)
            out.push_back({xc, 0.0, 0.0});
        }
      }
      return UnitFunction::piecewise_linear(std::move(out));
    }
    default:
      throw std::invalid_argument(
          "shift_down_clamp: only piecewise-linear/step/gridded transforms; "
          "grid the transform first");
  }
}

}  // namespace endomax
