#pragma once

#include <cstddef>
#include <span>

namespace hpconc {

/// Pairwise (cascade) summation in index order. The split points depend only
/// on the length, so the result is deterministic for a given input sequence.
/// Rounding error grows as O(log n) rather than O(n).
inline double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace hpconc
