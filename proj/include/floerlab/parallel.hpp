#pragma once

#include <cstddef>
#include <functional>

namespace floerlab {

/// Worker count: hardware concurrency, capped by FLOERLAB_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index runs exactly once; the first
/// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace floerlab
