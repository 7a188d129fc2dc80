#pragma once

#include <cstddef>
#include <span>

namespace hydrofel {

/// Pairwise (cascade) summation with a fixed split, so the result depends
/// only on the input order and never on thread count.
inline double pairwise_sum(std::span<const double> x) {
  constexpr std::size_t kBlock = 16;
  if (x.size() <= kBlock) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace hydrofel
