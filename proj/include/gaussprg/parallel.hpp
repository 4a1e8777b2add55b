// Deterministic chunked parallelism: workers claim chunk indices from an
// atomic counter and write into per-chunk slots, so results never depend on
// the thread count.  GAUSSPRG_THREADS caps the worker count.
#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gaussprg {

inline unsigned thread_budget() {
  if (const char* env = std::getenv("GAUSSPRG_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline void parallel_for_chunks(uint64_t n_chunks, const std::function<void(uint64_t)>& body) {
  unsigned workers = thread_budget();
  if (workers > n_chunks) workers = static_cast<unsigned>(n_chunks);
  if (workers <= 1) {
    for (uint64_t c = 0; c < n_chunks; ++c) body(c);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        uint64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        body(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gaussprg
