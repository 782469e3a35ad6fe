#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "endomax/rng.hpp"

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP implementation; both produce bit-identical results (reductions are
// integer counts or index-tie-broken minima over a fixed block decomposition,
// never order-dependent floating sums). The *_serial variants stay around for
// differential tests and the benchmark target.
namespace endomax::kernels {

namespace detail {
inline int& thread_cap() {
  static int cap = 0;  // 0 = runtime default
  return cap;
}
}  // namespace detail

inline void set_max_threads(int n) { detail::thread_cap() = n < 0 ? 0 : n; }

inline int max_threads() {
  const int cap = detail::thread_cap();
#ifdef _OPENMP
  const int hw = omp_get_max_threads();
  if (cap == 0) return hw;
  return cap < hw ? cap : hw;
#else
  return cap == 0 ? 1 : 1;
#endif
}

inline bool parallel_enabled(std::int64_t work) {
#ifdef _OPENMP
  return max_threads() > 1 && work >= (1 << 14);
#else
  (void)work;
  return false;
#endif
}

struct ScanBest {
  double value;
  double arg;
  std::int64_t index;
};

// Minimum of f over the points xs[i], smallest index wins ties.
template <class F>
ScanBest min_scan_serial(const F& f, const std::vector<double>& xs) {
  ScanBest best{0.0, 0.0, -1};
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(xs.size()); ++i) {
    const double v = f(xs[static_cast<std::size_t>(i)]);
    if (best.index < 0 || v < best.value) {
      best = {v, xs[static_cast<std::size_t>(i)], i};
    }
  }
  return best;
}

template <class F>
ScanBest min_scan_parallel(const F& f, const std::vector<double>& xs) {
#ifdef _OPENMP
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  const int blocks = max_threads() * 4;
  std::vector<ScanBest> part(static_cast<std::size_t>(blocks),
                             ScanBest{0.0, 0.0, -1});
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int b = 0; b < blocks; ++b) {
    const std::int64_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    ScanBest local{0.0, 0.0, -1};
    for (std::int64_t i = lo; i < hi; ++i) {
      const double v = f(xs[static_cast<std::size_t>(i)]);
      if (local.index < 0 || v < local.value) {
        local = {v, xs[static_cast<std::size_t>(i)], i};
      }
    }
    part[static_cast<std::size_t>(b)] = local;
  }
  ScanBest best{0.0, 0.0, -1};
  for (const ScanBest& p : part) {
    if (p.index < 0) continue;
    if (best.index < 0 || p.value < best.value ||
        (p.value == best.value && p.index < best.index)) {
      best = p;
    }
  }
  return best;
#else
  return min_scan_serial(f, xs);
#endif
}

template <class F>
ScanBest min_scan(const F& f, const std::vector<double>& xs) {
  if (parallel_enabled(static_cast<std::int64_t>(xs.size())))
    return min_scan_parallel(f, xs);
  return min_scan_serial(f, xs);
}

// Count of grid midpoints (i+1/2)/n, i in [0,n), where pred holds.
template <class P>
std::int64_t count_grid_serial(std::int64_t n, const P& pred) {
  std::int64_t c = 0;
  const double inv = 1.0 / static_cast<double>(n);
  for (std::int64_t i = 0; i < n; ++i) {
    if (pred((static_cast<double>(i) + 0.5) * inv)) ++c;
  }
  return c;
}

template <class P>
std::int64_t count_grid_parallel(std::int64_t n, const P& pred) {
#ifdef _OPENMP
  std::int64_t c = 0;
  const double inv = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(static) reduction(+ : c) \
    num_threads(max_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    if (pred((static_cast<double>(i) + 0.5) * inv)) ++c;
  }
  return c;
#else
  return count_grid_serial(n, pred);
#endif
}

template <class P>
std::int64_t count_grid(std::int64_t n, const P& pred) {
  if (parallel_enabled(n)) return count_grid_parallel(n, pred);
  return count_grid_serial(n, pred);
}

// Chunked seeded sampling: visit(i, rng) for each sample index, chunk by
// chunk; the per-chunk generator makes the stream independent of the thread
// count. Used both to materialize samples and to count hits.
template <class V>
void for_samples_serial(std::int64_t n, std::uint64_t seed, const V& visit) {
  const std::int64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  for (std::int64_t c = 0; c < chunks; ++c) {
    Rng rng(chunk_seed(seed, static_cast<std::uint64_t>(c)));
    const std::int64_t lo = c * kSampleChunk;
    const std::int64_t hi = lo + kSampleChunk < n ? lo + kSampleChunk : n;
    for (std::int64_t i = lo; i < hi; ++i) visit(i, rng);
  }
}

template <class V>
void for_samples_parallel(std::int64_t n, std::uint64_t seed, const V& visit) {
#ifdef _OPENMP
  const std::int64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::int64_t c = 0; c < chunks; ++c) {
    Rng rng(chunk_seed(seed, static_cast<std::uint64_t>(c)));
    const std::int64_t lo = c * kSampleChunk;
    const std::int64_t hi = lo + kSampleChunk < n ? lo + kSampleChunk : n;
    for (std::int64_t i = lo; i < hi; ++i) visit(i, rng);
  }
#else
  for_samples_serial(n, seed, visit);
#endif
}

template <class V>
void for_samples(std::int64_t n, std::uint64_t seed, const V& visit) {
  if (parallel_enabled(n))
    for_samples_parallel(n, seed, visit);
  else
    for_samples_serial(n, seed, visit);
}

// Hit count over the chunked sample stream; integer reduction, so the
// parallel result matches the serial one exactly.
template <class H>
std::int64_t count_samples_serial(std::int64_t n, std::uint64_t seed,
                                  const H& hit) {
  std::int64_t c = 0;
  for_samples_serial(n, seed, [&](std::int64_t, Rng& rng) {
    if (hit(rng)) ++c;
  });
  return c;
}

template <class H>
std::int64_t count_samples_parallel(std::int64_t n, std::uint64_t seed,
                                    const H& hit) {
#ifdef _OPENMP
  const std::int64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  std::int64_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total) \
    num_threads(max_threads())
  for (std::int64_t c = 0; c < chunks; ++c) {
    Rng rng(chunk_seed(seed, static_cast<std::uint64_t>(c)));
    const std::int64_t lo = c * kSampleChunk;
    const std::int64_t hi = lo + kSampleChunk < n ? lo + kSampleChunk : n;
    std::int64_t local = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      if (hit(rng)) ++local;
    }
    total += local;
  }
  return total;
#else
  return count_samples_serial(n, seed, hit);
#endif
}

template <class H>
std::int64_t count_samples(std::int64_t n, std::uint64_t seed, const H& hit) {
  if (parallel_enabled(n)) return count_samples_parallel(n, seed, hit);
  return count_samples_serial(n, seed, hit);
}

// Row-parallel loop for independent row work (oracle weight matrices).
template <class F>
void for_rows_serial(std::int64_t rows, const F& fn) {
  for (std::int64_t i = 0; i < rows; ++i) fn(i);
}

template <class F>
void for_rows_parallel(std::int64_t rows, const F& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
  for (std::int64_t i = 0; i < rows; ++i) fn(i);
#else
  for_rows_serial(rows, fn);
#endif
}

template <class F>
void for_rows(std::int64_t rows, std::int64_t work_per_row, const F& fn) {
  if (parallel_enabled(rows * work_per_row))
    for_rows_parallel(rows, fn);
  else
    for_rows_serial(rows, fn);
}

}  // namespace endomax::kernels
