#pragma once

#include <cstddef>
#include <functional>

namespace mapl {

/// Worker count: MAPL_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for i in [0, count) across worker_count() threads. Each
/// index is visited exactly once; callers write results by index, so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mapl
