#include "endomax/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "endomax/unit_function.hpp"

namespace endomax {

namespace {

double interp(double x0, double y0, double x1, double y1, double x) {
  return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

}  // namespace

Cdf::Cdf(std::vector<Node> nodes, std::vector<Piece> pieces, Method method,
         double error_bound, int grid_n)
    : nodes_(std::move(nodes)),
      pieces_(std::move(pieces)),
      method_(method),
      error_bound_(error_bound),
      grid_n_(grid_n) {
  require(nodes_.size() >= 2, "cdf: need at least the endpoint nodes");
  require(nodes_.front().x == 0.0 && nodes_.front().left == 0.0,
          "cdf: first node must be 0 with zero left limit");
  require(nodes_.back().x == 1.0 && nodes_.back().right == 1.0,
          "cdf: last node must be 1 with value 1");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    require(std::isfinite(nd.x) && nd.x >= 0.0 && nd.x <= 1.0,
            "cdf: node abscissa out of range");
    require(nd.left >= -1e-12 && nd.right <= 1.0 + 1e-12 && nd.left <= nd.right + 1e-12,
            "cdf: node values must satisfy 0 <= left <= right <= 1");
    if (i > 0) {
      require(nodes_[i - 1].x < nd.x, "cdf: nodes must be strictly sorted");
      require(nodes_[i - 1].right <= nd.left + 1e-12,
              "cdf: must be nondecreasing across nodes");
    }
  }
  if (pieces_.empty()) {
    pieces_.resize(nodes_.size() - 1);
  }
  require(pieces_.size() == nodes_.size() - 1,
          "cdf: need one piece per node gap");
  for (const Piece& p : pieces_)
    require(p.linear || p.eval != nullptr, "cdf: analytic piece without closure");
}

double Cdf::operator()(double y) const {
  require(y >= 0.0 && y <= 1.0, "cdf: argument must lie in [0,1]");
  auto it = std::upper_bound(
      nodes_.begin(), nodes_.end(), y,
      [](double v, const Node& nd) { return v < nd.x; });
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (nodes_[i].x == y) return nodes_[i].right;
  if (i + 1 >= nodes_.size()) return nodes_.back().right;
  const Piece& p = pieces_[i];
  if (p.linear)
    return interp(nodes_[i].x, nodes_[i].right, nodes_[i + 1].x,
                  nodes_[i + 1].left, y);
  return p.eval(y);
}

double Cdf::left_limit(double y) const {
  require(y >= 0.0 && y <= 1.0, "cdf: argument must lie in [0,1]");
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), y,
      [](const Node& nd, double v) { return nd.x < v; });
  if (it != nodes_.end() && it->x == y) return it->left;
  return (*this)(y);
}

double Cdf::quantile(double q) const {
  require(q >= 0.0 && q <= 1.0, "quantile: q must lie in [0,1]");
  // First node whose value reaches q.
  auto it = std::partition_point(
      nodes_.begin(), nodes_.end(),
      [q](const Node& nd) { return nd.right < q; });
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) return nodes_.front().x;
  if (nodes_[i].left < q) return nodes_[i].x;  // reached by the jump at x_i
  // Reached strictly inside the preceding gap.
  const Node& a = nodes_[i - 1];
  const Node& b = nodes_[i];
  const Piece& p = pieces_[i - 1];
  if (p.linear) {
    if (b.left == a.right) return b.x;  // flat gap, q == common value
    return interp(a.right, a.x, b.left, b.x, q);
  }
  double lo = a.x, hi = b.x;
  for (int it2 = 0; it2 < 200 && hi - lo > 1e-15; ++it2) {
    const double mid = 0.5 * (lo + hi);
    if (p.eval(mid) >= q)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::string Cdf::method_name() const {
  if (method_ == Method::Exact) return "exact";
  return "grid(" + std::to_string(grid_n_) + ")";
}

std::vector<Branch> quantile_branches(const Cdf& f) {
  const auto keep = std::make_shared<const Cdf>(f);
  const auto& ns = keep->nodes();
  const auto& ps = keep->pieces();
  std::vector<Branch> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    // Jump at node i covers q in (left, right]: quantile is constant x_i.
    const double j0 = i == 0 ? 0.0 : ns[i].left;
    if (ns[i].right > j0) {
      Branch b;
      b.x0 = j0;
      b.x1 = ns[i].right;
      b.y0 = b.y1 = ns[i].x;
      b.dir = 0;
      b.affine = true;
      out.push_back(std::move(b));
    }
    if (i + 1 >= ns.size()) break;
    // Mass carried continuously across the gap (x_i, x_{i+1}).
    if (ns[i + 1].left > ns[i].right) {
      Branch b;
      b.x0 = ns[i].right;
      b.x1 = ns[i + 1].left;
      b.y0 = ns[i].x;
      b.y1 = ns[i + 1].x;
      b.dir = 1;
      if (ps[i].linear) {
        b.affine = true;
      } else {
        b.affine = false;
        const double xlo = ns[i].x, xhi = ns[i + 1].x;
        b.eval = [keep, i, xlo, xhi](double q) {
          const auto& piece = keep->pieces()[i];
          double lo = xlo, hi = xhi;
          for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (piece.eval(mid) >= q)
              hi = mid;
            else
              lo = mid;
          }
          return hi;
        };
        b.inverse = [keep, i](double y) { return keep->pieces()[i].eval(y); };
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace endomax
