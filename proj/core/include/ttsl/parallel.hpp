#pragma once

#include <cstddef>
#include <functional>

namespace ttsl {

/// Worker count: min(hardware_concurrency, TTSS_THREADS if set).
int worker_threads();

/// Runs fn(i) for i in [0, count) across worker threads with a fixed block
/// split, so results are independent of the parallelism degree.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace ttsl
