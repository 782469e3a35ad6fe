// Micro-benchmark for the data-parallel kernels: each workload runs the
// serial reference and the OpenMP implementation on identical inputs,
// reports best-of-three wall times, and verifies the results agree exactly
// (the kernels are designed so thread count never changes the output).
//
// Usage: endomax_bench [scale]
//   scale multiplies the default problem sizes (default 1).
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "endomax/endograph.hpp"
#include "endomax/kernels.hpp"
#include "endomax/marginal.hpp"
#include "endomax/oracle.hpp"
#include "endomax/pushforward.hpp"
#include "endomax/sklar.hpp"
#include "endomax/unit_function.hpp"

using namespace endomax;

namespace {

template <class F>
double best_of(int reps, const F& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, s);
  }
  return best;
}

void report(const char* name, std::int64_t n, double serial_s,
            double parallel_s, bool equal) {
  std::printf("%-22s n=%-10lld serial %8.2f ms   parallel %8.2f ms   "
              "speedup %5.2fx   results %s\n",
              name, static_cast<long long>(n), serial_s * 1e3, parallel_s * 1e3,
              serial_s / parallel_s, equal ? "equal" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
  std::printf("threads available: %d\n", kernels::max_threads());

  // 1. Minimum scan of y - F_T(y), the inner loop of the maximum formula.
  {
    const auto t = UnitFunction::exp_ratio(0.5);
    const Cdf cdf = cdf_of(t);
    const std::int64_t n = static_cast<std::int64_t>(2e6 * scale);
    std::vector<double> ys(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
      ys[static_cast<std::size_t>(i)] =
          (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    auto f = [&](double y) { return y - cdf(y); };
    kernels::ScanBest a{}, b{};
    const double ts = best_of(3, [&] { a = kernels::min_scan_serial(f, ys); });
    const double tp = best_of(3, [&] { b = kernels::min_scan_parallel(f, ys); });
    report("min_scan", n, ts, tp,
           a.value == b.value && a.arg == b.arg && a.index == b.index);
  }

  // 2. Endograph membership counting on a midpoint grid.
  {
    const auto t = UnitFunction::parabola();
    const auto h = optimal_map(t).h;
    const std::int64_t n = static_cast<std::int64_t>(4e6 * scale);
    auto pred = [&](double x) { return h(x) <= t(x); };
    std::int64_t a = 0, b = 0;
    const double ts = best_of(3, [&] { a = kernels::count_grid_serial(n, pred); });
    const double tp = best_of(3, [&] { b = kernels::count_grid_parallel(n, pred); });
    report("count_grid", n, ts, tp, a == b);
  }

  // 3. Monte Carlo hit counting over the seeded chunked sample stream.
  {
    const auto f = Marginal::exponential(2.0);
    const auto g = Marginal::exponential(1.0);
    const auto res =
        max_prob_no_early_default(f, g, LinkFunction::identity());
    const auto& h = res.h;
    const std::int64_t n = static_cast<std::int64_t>(2e6 * scale);
    auto hit = [&](Rng& rng) {
      const double u = rng.next_open01();
      return g.quantile(clamp_open01(h(u))) <= f.quantile(u);
    };
    std::int64_t a = 0, b = 0;
    const double ts =
        best_of(3, [&] { a = kernels::count_samples_serial(n, 42, hit); });
    const double tp =
        best_of(3, [&] { b = kernels::count_samples_parallel(n, 42, hit); });
    report("count_samples", n, ts, tp, a == b);
  }

  // 4. Row-parallel oracle weight build (whole matrices compared).
  {
    const auto t = UnitFunction::exp_ratio(0.5);
    const int n = static_cast<int>(512 * std::max(0.25, scale));
    CellWeights a, b;
    kernels::set_max_threads(1);
    const double ts = best_of(3, [&] { a = cell_weights(t, n); });
    kernels::set_max_threads(0);
    const double tp = best_of(3, [&] { b = cell_weights(t, n); });
    report("cell_weights rows", static_cast<std::int64_t>(n) * n, ts, tp,
           a.inner == b.inner && a.outer == b.outer && a.full == b.full);
  }

  return 0;
}
