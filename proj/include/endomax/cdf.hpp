// Distribution function of a push-forward measure on [0,1].
//
// The representation is a sorted node table plus one piece per gap between
// consecutive nodes.  A node carries the left limit and the value at its
// abscissa, so atoms (jumps) are exact.  A piece is either linear between
// the surrounding node values or an analytic closure evaluating the cdf
// anywhere inside the open gap.  Closures keep smooth push-forwards exact
// instead of forcing everything through a sampled polyline.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "endomax/common.hpp"

namespace endomax {

struct Branch;

class Cdf {
 public:
  struct Node {
    double x;      // point on the value axis
    double left;   // lim_{y -> x-} F(y)
    double right;  // F(x)
  };
  struct Piece {
    bool linear = true;
    std::function<double(double)> eval;  // used when !linear
  };
  enum class Method { Exact, Grid };

  // nodes: sorted, first at 0 with left == 0, last at 1 with right == 1.
  // pieces: one per consecutive node pair; empty vector means all-linear.
  Cdf(std::vector<Node> nodes, std::vector<Piece> pieces, Method method,
      double error_bound, int grid_n = 0);

  double operator()(double y) const;   // F(y)
  double left_limit(double y) const;   // F(y-)
  // Quasi-inverse: smallest y with F(y) >= q (1 if no such y, which cannot
  // happen here since F(1) == 1).
  double quantile(double q) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  Method method() const { return method_; }
  double error_bound() const { return error_bound_; }
  int grid_n() const { return grid_n_; }
  std::string method_name() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Piece> pieces_;
  Method method_;
  double error_bound_;
  int grid_n_;
};

// Branch decomposition of the quantile function q -> inf{y : F(y) >= q}.
// Jumps of F become constant branches; mass-carrying gaps become increasing
// branches whose inverse closure is F itself, so the decomposition is exact.
std::vector<Branch> quantile_branches(const Cdf& f);

}  // namespace endomax
