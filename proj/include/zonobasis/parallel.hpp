#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace zonobasis {

/// Runs body(i) for i in [0, count) on up to `threads` workers with a fixed
/// strided assignment. Bodies must write disjoint outputs.
template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace zonobasis
