#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace sobq {

/// Global worker budget (set by the CLI --threads flag; default serial).
inline int& thread_budget() {
  static int n = 1;
  return n;
}

/// Run fn(chunk_index, begin, end) over [0, n) split into `chunks` contiguous
/// ranges.  Chunk partials must be reduced by the caller in chunk order so
/// results do not depend on scheduling.
inline void parallel_chunks(int n, int chunks, const std::function<void(int, int, int)>& fn) {
  if (chunks < 1) chunks = 1;
  if (chunks > n) chunks = n > 0 ? n : 1;
  if (chunks == 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (int c = 0; c < chunks; ++c) {
    int b = static_cast<int>(static_cast<long long>(n) * c / chunks);
    int e = static_cast<int>(static_cast<long long>(n) * (c + 1) / chunks);
    pool.emplace_back(fn, c, b, e);
  }
  for (auto& th : pool) th.join();
}

}  // namespace sobq
