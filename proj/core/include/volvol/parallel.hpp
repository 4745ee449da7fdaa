#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace volvol {

// Determine the worker count: explicit request wins, then the VOLVOL_THREADS
// environment variable, then hardware concurrency.
int resolve_threads(int requested);

// Run fn(i) for i in [0, count). Work items are claimed from a shared atomic
// counter, so results MUST be written to caller-owned slots indexed by i;
// aggregation stays with the caller (fixed-order reduction keeps results
// bit-identical for every thread count). The first exception thrown by any
// worker is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nworkers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(nworkers);
  for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace volvol
