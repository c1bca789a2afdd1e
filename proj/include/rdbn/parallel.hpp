#pragma once

#include <cstddef>
#include <functional>

namespace rdbn {

/// Run fn(0..count-1) on up to `jobs` worker threads. Tasks must write to
/// disjoint result slots; outputs are then independent of the job count.
/// jobs <= 1 runs inline. The first exception thrown by a task is rethrown
/// on the calling thread after all workers join.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace rdbn
