#pragma once

#include <cstddef>
#include <functional>

namespace hgsp {

/// Worker count for per-point loops. 0 selects the process default, which is
/// HGSP_THREADS when set and std::thread::hardware_concurrency() otherwise.
struct Parallelism {
  unsigned workers = 0;

  unsigned resolved() const noexcept;
};

/// Calls `body(begin, end)` over disjoint contiguous chunks covering [0, n).
/// Chunk boundaries depend on n and the worker count, so bodies must write
/// only to their own index range; results then do not depend on scheduling.
/// The first exception thrown by any chunk is rethrown on the caller.
void parallel_for(std::size_t n, const Parallelism& par,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace hgsp
