#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hpconc {

/// Number of worker threads used by the library; 0 means hardware concurrency.
struct Parallelism {
  unsigned threads = 0;

  unsigned resolve() const noexcept {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Runs fn(block_index) for every block in [0, blocks). Blocks are claimed in a
/// fixed interleaved pattern; callers write results into per-block slots and
/// reduce them in block order afterwards.
template <class Fn>
void parallel_blocks(std::size_t blocks, Parallelism par, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(par.resolve(), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) fn(b);
    });
  }
}

}  // namespace hpconc
