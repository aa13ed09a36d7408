#pragma once

#include <cstddef>
#include <functional>

namespace rei {

/// Worker count from REI_NUM_THREADS (default: hardware concurrency, min 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index writes only its own output slot,
/// so results do not depend on the thread count. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rei
