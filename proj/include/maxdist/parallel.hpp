#pragma once

#include <cstddef>
#include <functional>

namespace maxdist {

// Worker count resolution: explicit argument > THREADS environment variable >
// hardware concurrency. Thread count may only affect speed, never results;
// every parallel_for task writes to its own pre-assigned slot.
std::size_t resolve_thread_count(std::size_t requested = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Tasks are
// distributed by index; exceptions from tasks are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

}  // namespace maxdist
