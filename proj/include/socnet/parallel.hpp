#pragma once

#include <functional>

namespace socnet {

// worker cap: SOCNET_THREADS when set, hardware concurrency otherwise
int worker_count();

// runs fn(0..n-1) across workers; rethrows the first captured exception.
// Work items must not depend on execution order.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace socnet
