#pragma once

#include <cstddef>
#include <functional>

namespace kingman {

// Worker count: KINGMAN_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n) on a static partition of worker threads.
// Each index must write only its own output slot, so results do not depend
// on the thread count. The first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kingman
