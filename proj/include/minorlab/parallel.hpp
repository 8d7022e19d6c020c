#pragma once

/**
 * Replicate fan-out.  Work items are identified by a dense index; each item
 * is claimed exactly once from a shared counter and results must be written
 * into index-addressed slots.  Because every replicate derives its own RNG
 * stream from its index, the outcome is a pure function of (seed, index)
 * and the worker count can only change scheduling, never results.
 */

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace minorlab {

inline void parallel_for(int n_items, int n_workers, const std::function<void(int)>& body) {
  if (n_items < 0) throw std::invalid_argument("parallel_for: negative item count");
  if (n_workers < 1) throw std::invalid_argument("parallel_for: need at least one worker");
  if (n_items == 0) return;
  if (n_workers == 1) {
    for (int i = 0; i < n_items; ++i) body(i);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_items) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  const int spawned = std::min(n_workers, n_items) - 1;
  threads.reserve(spawned);
  for (int t = 0; t < spawned; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace minorlab
