#pragma once

#include <cstddef>
#include <functional>

namespace chjb {

/// Number of worker threads for kernel loops. Reads CONTACT_HJB_THREADS once;
/// defaults to the hardware concurrency.
int kernel_thread_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous ranges, one per
/// thread, so outputs written per index are identical for any thread count.
/// Small loops run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& range_fn);

}  // namespace chjb
