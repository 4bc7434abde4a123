#pragma once

#include <cstddef>
#include <functional>

namespace purify {

// Worker count for `tasks` independent jobs: hardware concurrency, capped by
// the PURIFY_THREADS environment variable when it holds a positive integer.
int worker_count(std::size_t tasks);

// Calls body(i) for i in [0, count) on up to worker_count(count) threads.
// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace purify
