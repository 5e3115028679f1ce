// Process-wide worker count and a static-partition parallel loop.
//
// Work is always split into the same index ranges for a given count, and
// callers merge per-index results in index order, so outputs never depend
// on the number of threads.
#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace bfree {

void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for every i in [0, count). Indices are distributed over the
// configured workers; the first exception (lowest worker) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bfree
