#pragma once

#include <cstddef>

namespace mcb {

/// Thread count for parallel loops: MCB_THREADS if set to a positive integer,
/// otherwise the OpenMP default.
int thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// identical to the serial order because each iteration writes only its own slot.
template <class Body>
void parallel_for(std::size_t n, Body&& body, bool parallel = true) {
  const auto count = static_cast<long long>(n);
  if (!parallel || n < 2) {
    for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace mcb
