#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace symport {

/// Process-wide default worker count (0 = hardware concurrency).
void set_default_threads(int n);
int default_threads();

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items must be
/// independent; no ordering is guaranteed between them.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

/// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n).
/// The chunk grid depends only on n and chunk_size, never on the worker
/// count, so per-chunk partial results can be reduced in chunk order to get
/// schedules-independent (bitwise reproducible) sums.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     int threads = 0);

}  // namespace symport
