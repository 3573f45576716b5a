#pragma once

// Index-partitioned parallel loop. Each index is processed exactly once and
// results are written to per-index slots, so output does not depend on the
// thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spectacle {

template <class F>
void parallel_for(std::int64_t n, int threads, F&& body) {
  if (n <= 0) return;
  const std::int64_t t = std::clamp<std::int64_t>(threads, 1, n);
  if (t == 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (std::int64_t w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < n; i += t) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace spectacle
