#pragma once

#include <functional>

namespace gapfuse {

// Worker cap: GAPFUSE_THREADS if set to a positive integer, else the
// hardware concurrency (at least 1).
int thread_budget();

// Runs fn(i) for i in [begin, end) across up to `threads` workers
// (0 = thread_budget()). Iterations must write to disjoint state; order of
// execution is unspecified. The first exception thrown by any iteration is
// rethrown on the calling thread after all workers finish.
void parallel_for(int begin, int end, const std::function<void(int)>& fn, int threads = 0);

}  // namespace gapfuse
