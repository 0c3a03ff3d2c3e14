// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <omp.h>

#include <cstddef>
#include <span>
#include <vector>

#include "bisph/numeric.hpp"

namespace bisph::detail {

int thread_count();

template <class Body>
void parallel_for(std::ptrdiff_t count, Body&& body) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
}

inline constexpr std::ptrdiff_t kSumChunk = 4096;

/// Sum of term(i) for i in [0, count). Chunk boundaries are fixed, so the
/// reduction tree does not depend on the number of threads.
template <class Term>
double deterministic_sum(std::ptrdiff_t count, Term&& term) {
  if (count <= 0) return 0.0;
  std::ptrdiff_t chunks = (count + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks));
  parallel_for(chunks, [&](std::ptrdiff_t c) {
    std::ptrdiff_t begin = c * kSumChunk;
    std::ptrdiff_t end = begin + kSumChunk < count ? begin + kSumChunk : count;
    double buf[kSumChunk];
    for (std::ptrdiff_t i = begin; i < end; ++i) buf[i - begin] = term(i);
    partial[static_cast<std::size_t>(c)] =
        pairwise_sum(std::span<const double>(buf, static_cast<std::size_t>(end - begin)));
  });
  return pairwise_sum(partial);
}

} // namespace bisph::detail
