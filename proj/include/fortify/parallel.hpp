#pragma once

#include <cstddef>
#include <functional>

namespace fortify {

/// Worker count used when a caller passes jobs == 0.
unsigned default_jobs();

/// Splits [0, n) into `jobs` contiguous ranges and runs body(begin, end, worker)
/// on each, one thread per range. Callers aggregate per-worker results by
/// range order, so results never depend on `jobs`.
void parallel_ranges(std::size_t n, unsigned jobs,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& body);

}  // namespace fortify
