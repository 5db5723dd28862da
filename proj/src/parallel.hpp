#pragma once

#include <functional>

namespace flip {

/// Worker count for Monte Carlo loops: hardware concurrency, capped by the
/// FLIP_THREADS environment variable when set.
int worker_threads();

/// Runs fn(0..count-1), possibly concurrently. Each replicate must write
/// only its own slot; callers reduce in index order afterwards, so results
/// do not depend on the schedule.
void parallel_replicates(int count, const std::function<void(int)>& fn);

}  // namespace flip
