#pragma once

#include <functional>

namespace fforge {

// Worker count: FFORGE_THREADS if set to a positive integer, otherwise the
// hardware concurrency. Always >= 1.
int thread_count();

// Calls fn(i) for i in [0, n) on up to thread_count() threads, each thread
// owning one contiguous block of indices. fn must write only to slots owned
// by its index; reductions over the results stay with the caller, which
// keeps them ordered and therefore bit-identical for any thread count.
// If several calls throw, the exception of the lowest index is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace fforge
