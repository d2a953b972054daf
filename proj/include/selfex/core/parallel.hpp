#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace selfex {

// Thread count from SELFEX_THREADS, else hardware concurrency (at least 1).
unsigned default_thread_count();

// Runs fn(job) for job in [0, jobs) on up to `threads` workers. Jobs are
// claimed dynamically; callers write results into per-job slots so the
// output order never depends on scheduling. The first exception is rethrown
// after all workers stop.
template <class Fn>
void parallel_for(std::size_t jobs, unsigned threads, Fn&& fn) {
  if (threads <= 1 || jobs <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        fn(j);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(jobs);
      }
    }
  };
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace selfex
