#pragma once

#include <cstddef>
#include <thread>
#include <vector>
#include <functional>
#include <algorithm>

namespace curvdecay {

inline int& thread_count() {
  static int n = 1;
  return n;
}

// Splits [0,n) into fixed contiguous chunks, one worker per chunk, then
// combines the per-chunk results in chunk order. The partition depends only
// on n and the configured thread count at the call site never changes the
// combination order, so results are bit-identical for any thread count.
template <typename T, typename Map, typename Combine>
T parallel_reduce(std::size_t n, T init, Map&& map, Combine&& combine) {
  int nt = std::max(1, thread_count());
  if (nt == 1 || n < 2) {
    T acc = init;
    for (std::size_t i = 0; i < n; ++i) acc = combine(acc, map(i));
    return acc;
  }
  std::size_t nchunks = std::min<std::size_t>(nt, n);
  std::vector<T> partial(nchunks, init);
  std::vector<std::thread> workers;
  workers.reserve(nchunks);
  for (std::size_t c = 0; c < nchunks; ++c) {
    std::size_t lo = n * c / nchunks, hi = n * (c + 1) / nchunks;
    workers.emplace_back([&, lo, hi, c] {
      T acc = init;
      for (std::size_t i = lo; i < hi; ++i) acc = combine(acc, map(i));
      partial[c] = acc;
    });
  }
  for (auto& w : workers) w.join();
  T acc = init;
  for (std::size_t c = 0; c < nchunks; ++c) acc = combine(acc, partial[c]);
  return acc;
}

template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  int nt = std::max(1, thread_count());
  if (nt == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t nchunks = std::min<std::size_t>(nt, n);
  std::vector<std::thread> workers;
  for (std::size_t c = 0; c < nchunks; ++c) {
    std::size_t lo = n * c / nchunks, hi = n * (c + 1) / nchunks;
    workers.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace curvdecay
