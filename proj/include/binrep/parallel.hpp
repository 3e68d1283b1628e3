#pragma once

#include <cstddef>
#include <functional>

namespace binrep {

// Number of worker threads to use: hardware concurrency, capped by the
// BINREP_THREADS environment variable when set.
std::size_t thread_cap();

// Runs fn(i) for i in [0, count). Work items must be independent; each
// writes only its own output slot, so results are schedule-independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace binrep
