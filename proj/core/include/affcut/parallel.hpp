#pragma once

#include <cstddef>
#include <functional>

namespace affcut {

/// Worker count: hardware concurrency, capped by AFFCUT_THREADS when it holds
/// a positive integer. Always at least 1.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Work items must not
/// share mutable state. The first exception thrown by any item is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t workers = worker_count());

}  // namespace affcut
