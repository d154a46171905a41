#pragma once

#include <cstddef>
#include <functional>

namespace ab {

// Worker count: AB_FORCES_THREADS caps it, 0 or unset means auto
// (hardware concurrency).  Read once per process.
std::size_t worker_count();

// Chunked parallel map over [0, n).  f(i) must only write state owned by
// index i; reductions happen after the join in index order, so results are
// independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

} // namespace ab
