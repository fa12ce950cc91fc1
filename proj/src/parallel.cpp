#include "curvlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace curvlab {

int worker_count() {
  if (const char* env = std::getenv("CURVLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 256);
    return 1;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {
thread_local bool inside_parallel_region = false;
}

void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
  const int workers = std::min<size_t>(static_cast<size_t>(worker_count()), count);
  // nested regions run serially in their worker thread
  if (workers <= 1 || inside_parallel_region) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      inside_parallel_region = true;
      try {
        for (size_t i = static_cast<size_t>(w); i < count; i += static_cast<size_t>(workers)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace curvlab
