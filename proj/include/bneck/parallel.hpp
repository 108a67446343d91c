#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bneck {

/// Worker count used by parallel_for: set_worker_count() if called, else
/// BOTTLENECK_LAB_THREADS, else the hardware concurrency.
int worker_count();
void set_worker_count(int count);

/// Runs body(chunk) for chunk = 0..chunks-1 on up to worker_count() threads.
/// Results must be written to per-chunk slots and reduced by the caller in
/// chunk order; chunk boundaries must not depend on the thread count.
template <class Body>
void parallel_chunks(std::size_t chunks, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i + 1 < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bneck
