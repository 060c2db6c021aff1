#pragma once

#include <cstddef>
#include <functional>

namespace resgas {

// Runs fn(i) for i in [0, count) on a small thread pool. Results must be
// written to per-index slots; the iteration order is unspecified but every
// index runs exactly once. Thread count comes from RESGAS_THREADS when set,
// otherwise std::thread::hardware_concurrency().
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

unsigned worker_thread_count();

}  // namespace resgas
