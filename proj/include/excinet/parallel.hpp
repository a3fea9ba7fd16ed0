#ifndef EXCINET_PARALLEL_HPP
#define EXCINET_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace excinet {

/// Worker budget: EXCINET_THREADS if set (clamped to >= 1), otherwise the
/// hardware concurrency.
inline int thread_budget() {
  if (const char* env = std::getenv("EXCINET_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs body(i) for i in [0, n) across the thread budget. Tasks are pulled
/// from a shared counter; callers index into preallocated output slots, so
/// results are position-stable no matter how work is scheduled. The first
/// exception is rethrown on the calling thread.
template <class Body>
void parallel_for(int n, Body&& body) {
  const int workers = std::min(thread_budget(), n > 0 ? n : 1);
  if (n <= 0) return;
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace excinet

#endif  // EXCINET_PARALLEL_HPP
