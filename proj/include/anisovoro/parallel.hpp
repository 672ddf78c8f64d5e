#pragma once

// Deterministic block parallelism. Work is cut into fixed-size blocks
// whose boundaries do not depend on the thread count; workers pick
// blocks off a shared counter and write into per-block slots, and the
// caller reduces the slots in block order. Results are therefore
// bit-identical for any number of threads.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "anisovoro/core.hpp"

namespace anisovoro {

inline constexpr int64_t kParallelBlockSize = 16384;

inline int default_thread_count() {
  if (const char* env = std::getenv("ANISOVORO_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int64_t parallel_block_count(int64_t total) {
  return (total + kParallelBlockSize - 1) / kParallelBlockSize;
}

// fn(block_index, begin, end) with [begin, end) a slice of [0, total).
template <typename Fn>
inline void parallel_blocks(int64_t total, int threads, Fn&& fn) {
  if (total <= 0) return;
  const int64_t blocks = parallel_block_count(total);
  auto run_block = [&](int64_t b) {
    const int64_t begin = b * kParallelBlockSize;
    const int64_t end = std::min(total, begin + kParallelBlockSize);
    fn(b, begin, end);
  };
  if (threads <= 1 || blocks == 1) {
    for (int64_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const int64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      run_block(b);
    }
  };
  const int n = static_cast<int>(std::min<int64_t>(threads, blocks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n - 1));
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace anisovoro
