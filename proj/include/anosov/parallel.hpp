#pragma once

#include <cstddef>
#include <functional>

namespace anosov {

/// Worker count: hardware concurrency capped by ANOSOV_KIT_THREADS.
std::size_t thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) and joins.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace anosov
