#pragma once

#include <cstddef>
#include <functional>

namespace unipulse {

//! Worker count: UNIPULSE_THREADS if set to a positive integer, otherwise the
//! hardware concurrency (at least 1).
unsigned thread_count();

//! Runs body(i) for i in [0, n) across thread_count() workers. Each index is
//! visited exactly once. If any call throws, the exception from the smallest
//! failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace unipulse
