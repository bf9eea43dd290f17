#pragma once

// Internal helpers for deterministic fork-join parallelism. Work is split
// into contiguous chunks; any reduction must combine per-chunk results in
// chunk order so the outcome does not depend on the worker count.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace marg::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 64u));
}

/// Runs fn(begin, end) over [0, total) split into contiguous ranges.
inline void parallel_ranges(std::size_t total, int threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(total, 1));
  if (workers <= 1 || total < 2) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::size_t chunk = (total + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
  for (int t = 0; t < workers; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace marg::detail
