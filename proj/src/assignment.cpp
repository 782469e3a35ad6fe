#include "endomax/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace endomax {

std::vector<int> solve_min_assignment(const std::vector<double>& cost, int n,
                                      double* total) {
  if (n <= 0 || cost.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("assignment: cost must be n x n with n >= 1");
  const double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] = row currently matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur =
            cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  if (total) *total = assignment_value(cost, n, row_to_col);
  return row_to_col;
}

std::vector<int> solve_max_assignment(const std::vector<double>& weight, int n,
                                      double* total) {
  std::vector<double> neg(weight.size());
  for (std::size_t k = 0; k < weight.size(); ++k) neg[k] = -weight[k];
  std::vector<int> sol = solve_min_assignment(neg, n, nullptr);
  if (total) *total = assignment_value(weight, n, sol);
  return sol;
}

double assignment_value(const std::vector<double>& weight, int n,
                        const std::vector<int>& row_to_col) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += weight[static_cast<std::size_t>(i) * n + row_to_col[i]];
  return s;
}

}  // namespace endomax
