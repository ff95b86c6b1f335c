#pragma once

// Deterministic parallel helpers. Work is split into fixed-size blocks whose
// boundaries never depend on the worker count, and block results are combined
// by a pairwise tree in block order, so sums are bit-identical for any value
// of FUETER_THREADS.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fueter/algebra.hpp"

namespace fueter {

/// Worker count: FUETER_THREADS when set and positive, otherwise hardware concurrency.
unsigned worker_count();

/// Calls fn(i) for i in [0, n); indices are claimed in contiguous chunks.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

inline constexpr std::size_t kReductionBlock = 256;

/// Pairwise (tree) sum in index order.
Quaternion pairwise_sum(std::span<const Quaternion> values);
double pairwise_sum(std::span<const double> values);

/// Sum of term(i) over [0, n), computed blockwise in parallel and combined
/// pairwise. Identical bits regardless of the number of workers.
Quaternion parallel_sum(std::size_t n, const std::function<Quaternion(std::size_t)>& term);

template <class T>
T pairwise_sum_of(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T acc = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum_of(v.subspan(0, half)) + pairwise_sum_of(v.subspan(half));
}

/// parallel_sum for any value type with += and +.
template <class T, class Term>
T parallel_sum_of(std::size_t n, const Term& term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<T> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(n, begin + kReductionBlock);
    std::array<T, kReductionBlock> local{};
    for (std::size_t i = begin; i < end; ++i) local[i - begin] = term(i);
    partial[b] = pairwise_sum_of(std::span<const T>(local.data(), end - begin));
  });
  return pairwise_sum_of(std::span<const T>(partial));
}

}  // namespace fueter
