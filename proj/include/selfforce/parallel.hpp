#pragma once

#include <cstddef>
#include <functional>

namespace selfforce {

/// Worker cap from SELFFORCE_THREADS; 1 (sequential) when unset or invalid.
std::size_t thread_cap();

/// Runs body(i) for i in [0, n) on up to thread_cap() threads. The first
/// exception thrown by any task is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace selfforce
