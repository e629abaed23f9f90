#pragma once

#include <cstddef>
#include <functional>

namespace diocap {

// Number of worker threads used by data-parallel loops. Defaults to the
// hardware concurrency, or DIOCAP_THREADS when that variable is set.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(i) for i in [0, n). Work is handed out in contiguous chunks; the
// body must write only to slot i of any shared output so results do not depend
// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace diocap
