#pragma once

#include <cstddef>
#include <functional>

namespace htc {

// Worker count: HTC_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) over contiguous chunks. Each index is visited
// exactly once; callers must only write to slots owned by i so results do not
// depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace htc
