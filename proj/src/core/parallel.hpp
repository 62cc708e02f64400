// SPDX-License-Identifier: Apache-2.0
//
// Deterministic data parallelism: results land in indexed slots and are
// reduced serially, so thread count never changes a single bit of output.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace twistlab {

/// out[i] = fn(i) for i < n, on `threads` workers (0 = all cores).
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn&& fn) {
  std::vector<T> out(n);
  auto body = [&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const tbb::blocked_range<std::size_t>& r) {
      for (std::size_t i = r.begin(); i != r.end(); ++i) out[i] = fn(i);
    });
  };
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  } else if (threads > 1) {
    tbb::task_arena arena(threads);
    arena.execute(body);
  } else {
    body();
  }
  return out;
}

/// Pairwise (cascade) sum; the tree shape depends only on the length.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Running sum with Kahan compensation.
struct KahanSum {
  double sum = 0, c = 0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace twistlab
