#pragma once

#include <cstddef>
#include <functional>

namespace spinlab {

/// Worker count: hardware concurrency, capped by SPINLAB_THREADS when set.
std::size_t thread_count();

/// Calls body(k) for k in [0, count) on up to thread_count() threads. Each
/// index is handled exactly once; callers write results into slot k so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace spinlab
