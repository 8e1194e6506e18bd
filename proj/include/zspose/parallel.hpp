#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace zspose {

/// Worker cap: ZSPE_THREADS when set (>=1), otherwise hardware concurrency.
int thread_cap();

/// Runs fn(i) for i in [0, n) on up to thread_cap() threads in contiguous
/// blocks. Callers keep determinism by writing only to slot i.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace zspose
