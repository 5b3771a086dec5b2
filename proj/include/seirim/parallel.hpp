#pragma once

#include <cstddef>
#include <functional>

namespace seirim {

// Runs fn(0..n-1) across up to `threads` workers. Callers write results into
// preallocated index-addressed slots, so output is identical for any thread
// count. threads <= 1 runs inline. The first exception thrown by a worker is
// rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Thread count actually used for a given request (0 means hardware default).
int resolve_threads(int requested);

} // namespace seirim
