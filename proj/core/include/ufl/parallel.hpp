#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ufl {

// Number of worker threads: UFL_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1). UFL_THREADS=1 forces serial execution.
inline unsigned worker_count() {
  if (const char* env = std::getenv("UFL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, n) across worker_count() threads in contiguous
// chunks. fn must only write to per-index state (e.g. out[i]); reductions
// are done by the caller afterwards, sequentially, so results do not depend
// on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ufl
