#pragma once
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sadt {

// Runs fn(i) for i in [0, count).  Work is pulled from an atomic counter, so
// the assignment of indices to threads is nondeterministic -- callers must
// write results into index-addressed slots and do any error selection or
// reduction afterwards in index order, which keeps outputs independent of the
// worker count.  The lowest-index exception wins and is rethrown after join.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t nthreads =
      workers <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_index = count;
  std::exception_ptr err;
  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace sadt
