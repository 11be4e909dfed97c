#pragma once

#include <cstddef>
#include <functional>

namespace sdct {

/// Runs task(i) for every i in [0, count) on up to `workers` threads.
/// Threads pull indices from a shared counter; callers write results into
/// per-index slots so the merged output never depends on scheduling.
/// workers <= 1 runs inline. The first exception thrown by a task is
/// rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

/// Worker count after applying the SDCT_WORKERS environment override.
int resolve_workers(int requested);

}  // namespace sdct
