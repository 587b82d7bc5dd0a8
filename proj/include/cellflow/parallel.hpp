#pragma once

#include <cstddef>
#include <functional>

namespace cellflow {

/// Worker count for intra-iteration fan-out: CELLFLOW_THREADS when set to a
/// positive integer, otherwise the hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results by index so output order does
/// not depend on scheduling. The first exception thrown by any body is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace cellflow
