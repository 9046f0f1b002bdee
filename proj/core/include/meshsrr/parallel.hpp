#pragma once

#include <cstddef>
#include <functional>

namespace meshsrr {

// Worker cap: MESH_SRR_THREADS if set and positive, otherwise the hardware
// concurrency (at least 1).
std::size_t worker_threads();

// Runs body(begin, end) over contiguous chunks of [0, count). Each index is
// visited by exactly one chunk, so per-index writes stay deterministic.
// Falls back to a single call when the work is small or only one worker is
// allowed.
void parallel_rows(std::size_t count, std::size_t work_per_row,
                   const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace meshsrr
