// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>

namespace t2c {

// Worker cap from T2_CERTIFY_THREADS, else hardware concurrency (>= 1).
std::size_t default_worker_count();

// Splits [0, count) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. Chunk boundaries depend only on (count, workers);
// callers write results by index and reduce in index order afterwards, so the
// outcome does not depend on scheduling. If chunks throw, the exception of
// the lowest chunk is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace t2c
