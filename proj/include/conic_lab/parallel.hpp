#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace conic_lab {

// How a data-parallel kernel splits its outer loop. Kernels write one result
// per row and reduce rows in index order, so the output never depends on
// `workers` or on scheduling.
struct ParallelPlan {
  unsigned workers = 1;
  std::size_t stripe = 16;  // rows claimed per grab
};

// Runs fn(row) for every row in [0, rows) across plan.workers threads.
// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void for_each_row(std::size_t rows, const ParallelPlan& plan, Fn&& fn) {
  const unsigned workers = std::max(1u, plan.workers);
  const std::size_t stripe = std::max<std::size_t>(1, plan.stripe);
  if (workers == 1 || rows <= stripe) {
    for (std::size_t r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (;;) {
        std::size_t begin = next.fetch_add(stripe);
        if (begin >= rows) break;
        std::size_t end = std::min(rows, begin + stripe);
        for (std::size_t r = begin; r < end; ++r) fn(r);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(rows);
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace conic_lab
