#pragma once

#include <stdexcept>
#include <string>

namespace endomax {

inline constexpr const char* kVersion = "0.1.0";

// Thrown when an iterative routine cannot meet its accuracy contract
// (quadrature eval cap, non-finite intermediate, ...). The CLI maps this
// to a distinct exit code.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double clamp01(double v) {
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

// Clamp into the open unit interval before a marginal quantile call, so
// unbounded supports never produce infinities. The margin is one half-ulp
// at 1, far below any statistical resolution.
inline double clamp_open01(double v) {
  constexpr double lo = 1.1102230246251565e-16;  // 2^-53
  constexpr double hi = 1.0 - 1.1102230246251565e-16;
  if (v < lo) return lo;
  if (v > hi) return hi;
  return v;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace endomax
