#pragma once

#include <vector>

namespace endomax {

// Dense linear assignment (Kuhn-Munkres with row/column potentials, O(n^3)).
// cost is row-major n x n. Returns the row -> column assignment; total gets
// the optimal cost sum when non-null.
std::vector<int> solve_min_assignment(const std::vector<double>& cost, int n,
                                      double* total = nullptr);

// Maximizing variant (negates the weights).
std::vector<int> solve_max_assignment(const std::vector<double>& weight, int n,
                                      double* total = nullptr);

// Objective of an assignment re-summed in row order; used so that optimal
// values from different solvers can be compared without accumulation-order
// noise.
double assignment_value(const std::vector<double>& weight, int n,
                        const std::vector<int>& row_to_col);

}  // namespace endomax
