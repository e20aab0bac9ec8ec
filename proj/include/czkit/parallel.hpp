#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>

namespace czkit {

/// Caps the number of worker threads; 0 restores the hardware default.
void set_thread_count(unsigned count);
unsigned thread_count();

namespace detail {
void run_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk);
}

/// Calls body(i) for every i in [0, n). Each index is visited exactly once,
/// so writes to per-index slots give thread-count independent results.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  detail::run_chunks(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) body(i);
  });
}

}  // namespace czkit
