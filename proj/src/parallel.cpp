#include "rsinr/parallel.hpp"

#include <omp.h>

#include <thread>

namespace rsinr {

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) { g_threads = threads; }

int thread_count() {
  if (g_threads >= 1) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int threads = thread_count();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(threads) schedule(static)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace rsinr
