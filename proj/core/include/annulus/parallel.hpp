#pragma once

#include <cstddef>
#include <functional>

namespace annulus {

/// Worker count: ANNULUS_SPECTRA_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; callers write into per-index slots and reduce in
/// index order, which keeps results independent of the thread count. The first
/// exception thrown by a worker is rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace annulus
