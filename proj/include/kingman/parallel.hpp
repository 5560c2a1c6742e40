#pragma once

// Replicate-level fan-out. Work items must be independent (each replicate
// derives its own rng stream from its index), so scheduling order cannot
// change results.

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace kingman {

inline unsigned default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

template <typename Fn>
void parallel_for(std::uint64_t count, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = default_thread_count();
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace kingman
