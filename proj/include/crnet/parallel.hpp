#pragma once

#include <cstddef>
#include <functional>

namespace crnet {

/// Splits [0, n) into at most `threads` contiguous chunks and runs fn(begin, end)
/// on each, one chunk per thread. threads <= 1 runs inline. Exceptions from any
/// chunk are rethrown after all threads have joined.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace crnet
