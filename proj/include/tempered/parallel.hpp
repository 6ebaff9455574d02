#pragma once

#include <cstddef>
#include <functional>

namespace tempered {

/// Runs body(i) for i in [0, count) on up to `threads` worker threads.
/// threads == 0 selects std::thread::hardware_concurrency(). Callers write
/// results into pre-sized slots indexed by i, which keeps output independent
/// of scheduling. If any body throws, the exception from the lowest index is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace tempered
