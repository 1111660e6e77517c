#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace siu3r {

/// Runs fn(i) for i in [0, n). Work items must be independent; results are
/// deterministic regardless of worker count because each index owns its
/// output slot.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                         unsigned workers = 0) {
  if (n <= 0) return;
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers <= 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace siu3r
