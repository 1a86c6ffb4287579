#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace qkd {

// Runs body(i) for i in [0, n) across up to `threads` workers. Each
// index owns its output slot, so results do not depend on the worker
// count. Exceptions from workers are swallowed per-index contract: the
// body must not throw.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  const unsigned workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        body(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace qkd
