#pragma once

#include <cstddef>
#include <functional>

namespace gnb {

/// Worker count from GNB_THREADS: unset or 0 selects the hardware
/// concurrency, 1 selects the sequential mode.
int thread_count();

/// Runs body(i) for i in [0, count) in contiguous chunks. Each index is
/// handled by exactly one thread and callers only write per-index outputs,
/// so results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gnb
