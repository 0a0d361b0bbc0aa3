#include "hgsp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hgsp {

unsigned Parallelism::resolved() const noexcept {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("HGSP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const Parallelism& par,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  // Small chunks keep load balanced when per-point cost varies.
  constexpr std::size_t kMinChunk = 256;
  const std::size_t workers = std::min<std::size_t>(par.resolved(), (n + kMinChunk - 1) / kMinChunk);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = std::max(kMinChunk, n / (workers * 8));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      try {
        body(begin, std::min(n, begin + chunk));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace hgsp
