#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trollgraph {

// Items are reduced in fixed blocks of this size: contributions are summed
// in item order within a block and block partials in block order, so results
// are bit-identical for any thread count.
inline constexpr std::size_t kReductionBlock = 32;

inline std::size_t num_blocks(std::size_t n_items) {
  return (n_items + kReductionBlock - 1) / kReductionBlock;
}

inline int effective_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) return requested;
  return omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

// Runs fn(block_index, item_begin, item_end) once per block, possibly
// concurrently. Blocks never overlap.
template <typename Fn>
void parallel_blocks(std::size_t n_items, int threads, Fn&& fn) {
  const std::size_t blocks = num_blocks(n_items);
  const int nt = effective_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = begin + kReductionBlock < n_items ? begin + kReductionBlock : n_items;
    fn(static_cast<std::size_t>(b), begin, end);
  }
  (void)nt;
}

// One partial sum: a scalar plus an optional dense vector.
struct BlockAccum {
  double value = 0.0;
  std::vector<double> vec;
};

// Deterministic map-reduce over items. fn(block, begin, end, accum) adds the
// block's contribution into a zeroed accumulator; partials are then folded in
// block order. Blocks are processed in bounded windows so at most
// 4*threads partial vectors are alive at once; the fold order, and hence the
// result, is the same for any thread count or window size.
template <typename Fn>
BlockAccum blocked_reduce(std::size_t n_items, std::size_t vec_size, int threads, Fn&& fn) {
  const std::size_t blocks = num_blocks(n_items);
  const int nt = effective_threads(threads);
  BlockAccum total;
  total.vec.assign(vec_size, 0.0);
  const std::size_t window = std::max<std::size_t>(1, static_cast<std::size_t>(nt) * 4);
  std::vector<BlockAccum> partials;
  for (std::size_t w0 = 0; w0 < blocks; w0 += window) {
    const std::size_t w1 = std::min(blocks, w0 + window);
    partials.resize(w1 - w0);
    for (auto& p : partials) {
      p.value = 0.0;
      p.vec.assign(vec_size, 0.0);
    }
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) schedule(static)
#endif
    for (long long b = static_cast<long long>(w0); b < static_cast<long long>(w1); ++b) {
      const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
      const std::size_t end =
          begin + kReductionBlock < n_items ? begin + kReductionBlock : n_items;
      fn(static_cast<std::size_t>(b), begin, end, partials[static_cast<std::size_t>(b) - w0]);
    }
    for (const auto& p : partials) {
      total.value += p.value;
      for (std::size_t j = 0; j < vec_size; ++j) total.vec[j] += p.vec[j];
    }
  }
  return total;
}

// Plain parallel loop over items; each item touched exactly once.
template <typename Fn>
void parallel_items(std::size_t n_items, int threads, Fn&& fn) {
  const int nt = effective_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for num_threads(nt) schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(n_items); ++i) {
    fn(static_cast<std::size_t>(i));
  }
  (void)nt;
}

}  // namespace trollgraph
