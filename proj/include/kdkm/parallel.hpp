#pragma once

#include <cstddef>
#include <functional>

namespace kdkm {

// Runs jobs 0..n_jobs-1 on up to `workers` threads. Jobs must write only to
// their own slots so results cannot depend on scheduling; exceptions are
// rethrown on the caller thread (lowest job index wins when several throw).
// workers <= 1 executes inline.
void parallel_for(std::size_t n_jobs, unsigned workers,
                  const std::function<void(std::size_t)>& job);

}  // namespace kdkm
