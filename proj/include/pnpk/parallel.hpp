#pragma once

#include <cstddef>
#include <functional>

namespace pnpk {

/// Worker count: PNPK_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(begin, end) over a fixed partition of [0, n). The partition only
/// depends on n and the worker count, and callers write to disjoint slots, so
/// results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace pnpk
