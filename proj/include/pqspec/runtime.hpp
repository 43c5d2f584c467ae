#pragma once

#include <cstddef>

namespace pqspec {

/// Worker count for table sweeps. Initialized from PQSPEC_THREADS on first
/// use, default 1. Results are bitwise independent of this value: sums are
/// always reduced over fixed point batches in batch order.
std::size_t thread_count();
void set_thread_count(std::size_t n);

} // namespace pqspec
