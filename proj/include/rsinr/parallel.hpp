#pragma once

#include <cstddef>
#include <functional>

namespace rsinr {

/// Caps the number of worker threads used by pixel-parallel loops.
/// Values < 1 select the machine's hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Iterations must write disjoint outputs;
/// no reduction happens here, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rsinr
