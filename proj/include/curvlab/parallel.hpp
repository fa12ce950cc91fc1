#pragma once

#include <cstddef>
#include <functional>

namespace curvlab {

/// Worker count for parallel sections: CURVLAB_THREADS if set (clamped to
/// [1, 256]), otherwise hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, count), statically partitioned across workers.
/// Callers own determinism: write results by index, reduce in index order.
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

}  // namespace curvlab
