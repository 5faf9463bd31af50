#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace kinturb {

/// Resolves a requested thread count; 0 means "all available".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(begin, end) over contiguous chunks of [0, n).
///
/// Callers must not depend on the chunking for their result: workers either
/// write disjoint cells or reduce through order-insensitive operations (max).
/// That keeps results identical for every thread count.
template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (n <= 0) return;
  long t = std::clamp<long>(threads, 1, n);
  if (t <= 1) {
    fn(0L, n);
    return;
  }
  const long chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(t));
  for (long i = 0; i < t; ++i) {
    const long b = i * chunk;
    const long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([b, e, &fn] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace kinturb
