#pragma once

#include <functional>

namespace bfsi {

// Worker count: BFSI_WORKERS when set (>= 1, may oversubscribe), otherwise
// hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n). Each index is handled by exactly one worker,
// so results written per index are identical for any worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace bfsi
