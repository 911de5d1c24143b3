#pragma once

#include <cstddef>
#include <functional>

namespace jb {

/// Worker count used by parallel_for. Defaults to TOOL_THREADS when set,
/// otherwise the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Iterations must only write to their own
/// slots; results are then independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace jb
