#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace donorspin {

inline std::atomic<int>& thread_override() {
  static std::atomic<int> n{0};
  return n;
}

inline void set_thread_override(int n) { thread_override() = n; }

inline int default_thread_count() {
  if (const int n = thread_override().load(); n > 0) return n;
  if (const char* env = std::getenv("DONORSPIN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(block_index, begin, end) over fixed-size blocks of [0, n). The block
// decomposition depends only on n, never on the thread count, so any
// per-block partial results reduced in block order are bit-reproducible.
inline void parallel_blocks(std::size_t n, std::size_t block,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                            int threads = 0) {
  if (n == 0) return;
  if (block == 0) block = 1;
  const std::size_t nblocks = (n + block - 1) / block;
  if (threads <= 0) threads = default_thread_count();
  if (threads == 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      fn(b, b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      fn(b, b * block, std::min(n, (b + 1) * block));
    }
  };
  std::vector<std::thread> pool;
  const int nt = static_cast<int>(std::min<std::size_t>(threads, nblocks));
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace donorspin
