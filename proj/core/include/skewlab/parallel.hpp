#pragma once

#include <cstddef>
#include <functional>

namespace skewlab {

/// Number of workers to use when the caller passes 0.
unsigned default_thread_count();

/// Splits [0, count) into contiguous chunks and runs body(begin, end) on up
/// to `threads` workers. Chunk boundaries depend only on `count`, never on
/// `threads`, so per-index outputs are identical for any worker count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace skewlab
