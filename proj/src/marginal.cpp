#include "endomax/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace endomax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Marginal Marginal::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
  Marginal m;
  m.kind_ = Kind::Exponential;
  m.rate_ = rate;
  return m;
}

Marginal Marginal::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          "uniform: need finite a < b");
  Marginal m;
  m.kind_ = Kind::Uniform;
  m.a_ = a;
  m.b_ = b;
  return m;
}

Marginal Marginal::piecewise_linear_cdf(
    std::vector<std::pair<double, double>> nodes) {
  require(nodes.size() >= 2, "piecewise_linear_cdf: need at least two nodes");
  require(nodes.front().second == 0.0 && nodes.back().second == 1.0,
          "piecewise_linear_cdf: F must run from 0 to 1");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require(std::isfinite(nodes[i].first) && std::isfinite(nodes[i].second),
            "piecewise_linear_cdf: non-finite node");
    require(nodes[i].second >= 0.0 && nodes[i].second <= 1.0,
            "piecewise_linear_cdf: F values must lie in [0,1]");
    if (i > 0) {
      require(nodes[i - 1].first < nodes[i].first,
              "piecewise_linear_cdf: x must be strictly increasing");
      require(nodes[i - 1].second <= nodes[i].second,
              "piecewise_linear_cdf: F must be nondecreasing");
    }
  }
  Marginal m;
  m.kind_ = Kind::PiecewiseLinearCdf;
  m.nodes_ = std::move(nodes);
  return m;
}

Marginal Marginal::empirical_continuous(std::vector<double> sample) {
  require(sample.size() >= 2, "empirical_continuous: need at least two points");
  std::sort(sample.begin(), sample.end());
  for (std::size_t i = 0; i + 1 < sample.size(); ++i)
    require(sample[i] < sample[i + 1],
            "empirical_continuous: tied observations would create an atom");
  const double n1 = static_cast<double>(sample.size()) - 1.0;
  std::vector<std::pair<double, double>> nodes;
  nodes.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i)
    nodes.emplace_back(sample[i], static_cast<double>(i) / n1);
  nodes.back().second = 1.0;
  Marginal m = piecewise_linear_cdf(std::move(nodes));
  m.kind_ = Kind::EmpiricalContinuous;
  return m;
}

double Marginal::cdf(double x) const {
  if (std::isnan(x)) return 0.0;
  switch (kind_) {
    case Kind::Exponential:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-rate_ * x);
    case Kind::Uniform:
      return clamp01((x - a_) / (b_ - a_));
    case Kind::PiecewiseLinearCdf:
    case Kind::EmpiricalContinuous: {
      if (x <= nodes_.front().first) return 0.0;
      if (x >= nodes_.back().first) return 1.0;
      auto it = std::upper_bound(
          nodes_.begin(), nodes_.end(), x,
          [](double v, const std::pair<double, double>& nd) {
            return v < nd.first;
          });
      const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
      const auto& [x0, p0] = nodes_[i];
      const auto& [x1, p1] = nodes_[i + 1];
      return p0 + (p1 - p0) * ((x - x0) / (x1 - x0));
    }
  }
  return 0.0;
}

double Marginal::quantile(double q) const {
  require(q >= 0.0 && q <= 1.0, "quantile: q must lie in [0,1]");
  switch (kind_) {
    case Kind::Exponential:
      // -log(1-q)/rate; +infinity at q = 1 by IEEE propagation.
      return -std::log1p(-q) / rate_;
    case Kind::Uniform:
      return a_ + q * (b_ - a_);
    case Kind::PiecewiseLinearCdf:
    case Kind::EmpiricalContinuous: {
      auto it = std::partition_point(
          nodes_.begin(), nodes_.end(),
          [q](const std::pair<double, double>& nd) { return nd.second < q; });
      const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
      if (i == 0) return nodes_.front().first;
      const auto& [x0, p0] = nodes_[i - 1];
      const auto& [x1, p1] = nodes_[i];
      if (p1 == p0) return x1;  // defensive; partition point skips flats
      return x0 + (x1 - x0) * ((q - p0) / (p1 - p0));
    }
  }
  return 0.0;
}

double Marginal::support_lo() const {
  switch (kind_) {
    case Kind::Exponential:
      return 0.0;
    case Kind::Uniform:
      return a_;
    default:
      return nodes_.front().first;
  }
}

double Marginal::support_hi() const {
  switch (kind_) {
    case Kind::Exponential:
      return kInf;
    case Kind::Uniform:
      return b_;
    default:
      return nodes_.back().first;
  }
}

double Marginal::sample(Rng& rng) const { return quantile(rng.next_open01()); }

double Marginal::rate() const {
  require(kind_ == Kind::Exponential, "rate: not exponential");
  return rate_;
}

std::pair<double, double> Marginal::bounds() const {
  require(kind_ == Kind::Uniform, "bounds: not uniform");
  return {a_, b_};
}

const std::vector<std::pair<double, double>>& Marginal::nodes() const {
  require(kind_ == Kind::PiecewiseLinearCdf || kind_ == Kind::EmpiricalContinuous,
          "nodes: marginal has no node table");
  return nodes_;
}

bool Marginal::operator==(const Marginal& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Exponential:
      return rate_ == o.rate_;
    case Kind::Uniform:
      return a_ == o.a_ && b_ == o.b_;
    default:
      return nodes_ == o.nodes_;
  }
}

std::string Marginal::describe() const {
  switch (kind_) {
    case Kind::Exponential:
      return "exponential(rate=" + fmt_g(rate_) + ")";
    case Kind::Uniform:
      return "uniform(" + fmt_g(a_) + "," + fmt_g(b_) + ")";
    case Kind::PiecewiseLinearCdf:
      return "piecewise-linear-cdf(" + std::to_string(nodes_.size()) + " nodes)";
    case Kind::EmpiricalContinuous:
      return "empirical(" + std::to_string(nodes_.size()) + " points)";
  }
  return {};
}

LinkFunction LinkFunction::identity() { return LinkFunction(); }

LinkFunction LinkFunction::affine(double slope, double intercept) {
  require(std::isfinite(slope) && std::isfinite(intercept),
          "affine: parameters must be finite");
  LinkFunction s;
  s.kind_ = Kind::Affine;
  s.slope_ = slope;
  s.intercept_ = intercept;
  return s;
}

LinkFunction LinkFunction::gridded_real(std::vector<double> breakpoints,
                                        std::vector<double> values) {
  require(breakpoints.size() >= 2, "gridded_real: need at least two breakpoints");
  require(breakpoints.size() == values.size(),
          "gridded_real: breakpoints/values size mismatch");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    require(std::isfinite(breakpoints[i]) && std::isfinite(values[i]),
            "gridded_real: non-finite entry");
    if (i > 0)
      require(breakpoints[i - 1] < breakpoints[i],
              "gridded_real: breakpoints must be strictly increasing");
  }
  LinkFunction s;
  s.kind_ = Kind::GriddedReal;
  s.xs_ = std::move(breakpoints);
  s.ys_ = std::move(values);
  return s;
}

double LinkFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::Identity:
      return x;
    case Kind::Affine:
      return slope_ * x + intercept_;
    case Kind::GriddedReal: {
      if (x <= xs_.front()) return ys_.front();
      if (x >= xs_.back()) return ys_.back();
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
      const double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
      return ys_[i] + t * (ys_[i + 1] - ys_[i]);
    }
  }
  return x;
}

bool LinkFunction::nondecreasing() const {
  switch (kind_) {
    case Kind::Identity:
      return true;
    case Kind::Affine:
      return slope_ >= 0.0;
    case Kind::GriddedReal:
      return std::is_sorted(ys_.begin(), ys_.end());
  }
  return true;
}

double LinkFunction::slope() const {
  require(kind_ == Kind::Affine, "slope: not affine");
  return slope_;
}

double LinkFunction::intercept() const {
  require(kind_ == Kind::Affine, "intercept: not affine");
  return intercept_;
}

const std::vector<double>& LinkFunction::breakpoints() const {
  require(kind_ == Kind::GriddedReal, "breakpoints: not gridded");
  return xs_;
}

const std::vector<double>& LinkFunction::values() const {
  require(kind_ == Kind::GriddedReal, "values: not gridded");
  return ys_;
}

std::string LinkFunction::describe() const {
  switch (kind_) {
    case Kind::Identity:
      return "identity";
    case Kind::Affine:
      return "affine(" + fmt_g(slope_) + "x+" + fmt_g(intercept_) + ")";
    case Kind::GriddedReal:
      return "gridded(" + std::to_string(xs_.size()) + " breakpoints)";
  }
  return {};
}

}  // namespace endomax
