#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace wsbm {

// Worker count for `jobs` independent tasks: hardware concurrency by
// default, overridden by the WSBM_THREADS environment variable when set
// to a positive integer (useful both to throttle and to force a thread
// count above the core count when checking scheduling independence).
inline int worker_count(long jobs) {
  long cap = static_cast<long>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("WSBM_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1)
      cap = std::min(parsed, 256L);
  }
  return static_cast<int>(std::min(jobs, cap));
}

// Run fn(0..count-1) across worker threads (atomic work stealing by
// index). Results must be written to disjoint slots by index so the
// outcome is independent of scheduling. If any call throws, the exception
// from the smallest failing index is rethrown after all workers join.
inline void parallel_for(long count, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  const int workers = worker_count(count);
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::pair<long, std::exception_ptr>> errors(
      static_cast<std::size_t>(workers), {-1, nullptr});
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          auto& slot = errors[static_cast<std::size_t>(w)];
          if (slot.first < 0 || i < slot.first)
            slot = {i, std::current_exception()};
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::exception_ptr first;
  long first_index = -1;
  for (const auto& [idx, err] : errors) {
    if (err && (first_index < 0 || idx < first_index)) {
      first_index = idx;
      first = err;
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace wsbm
