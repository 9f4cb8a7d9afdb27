#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cartelscreen {

// Runs fn(i) for i in [0, n). Work items must be independent; any RNG use
// inside fn has to derive its own seed from i so the result does not depend
// on the thread count.
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs < 1) jobs = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), n ? n : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (err || next >= n) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace cartelscreen
