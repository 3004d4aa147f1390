#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace speechagent::bench {

// Calls fn(i) for i in [0, n) on at most `workers` threads. Callers write
// results by index, so aggregates do not depend on scheduling. The first
// exception is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(w, n); ++t) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace speechagent::bench
