#pragma once

#include <cstddef>
#include <functional>

namespace liouville {

/** Number of worker threads used by parallel sweeps (0 selects hardware concurrency). */
void set_worker_count(unsigned workers);
unsigned worker_count();

/**
 * Runs body(i) for i in [0, n) on the worker pool. Indices are handed out
 * from a shared counter; callers write results into slot i so that output
 * order never depends on scheduling. The first exception is rethrown.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace liouville
