#pragma once

#include <cstddef>
#include <functional>

namespace lsl {

/// Worker count: LSL_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(k) for k in [0, n) on up to worker_count() threads, each
/// thread taking one contiguous block. body must only write to slots
/// owned by its own index; results are then independent of the thread
/// count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lsl
