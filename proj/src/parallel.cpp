#include "czkit/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace czkit {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned count) { g_threads = count; }

unsigned thread_count() {
  unsigned t = g_threads.load();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

namespace detail {

void run_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1 || n < 64) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * step;
    const std::size_t hi = std::min(n, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&chunk, lo, hi] { chunk(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail
}  // namespace czkit
