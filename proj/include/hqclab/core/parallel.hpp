#pragma once

#include <cstddef>
#include <functional>

namespace hqclab
{
//! Worker count used when a caller passes 0. Initialized from HQCLAB_THREADS
//! or the hardware concurrency.
std::size_t default_threads();
void set_default_threads(std::size_t n);

//! Run body(i) for i in [0, n) on up to `threads` workers with a static block
//! partition. Each index is processed exactly once; callers write into
//! preallocated slots so results never depend on the worker count.
void parallel_for(std::size_t n,
                  std::function<void(std::size_t)> const& body,
                  std::size_t threads = 0);

}  // namespace hqclab
