#include "kdkm/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace kdkm {

void parallel_for(std::size_t n_jobs, unsigned workers,
                  const std::function<void(std::size_t)>& job) {
  if (n_jobs == 0) return;
  if (workers <= 1 || n_jobs == 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) job(i);
    return;
  }

  const unsigned n_threads = static_cast<unsigned>(
      std::min<std::size_t>(workers, n_jobs));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n_jobs);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_jobs) return;
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace kdkm
