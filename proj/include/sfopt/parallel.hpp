#pragma once

#include <functional>

namespace sfopt {

/// Runs fn(i) for every i in [0, count) on up to `threads` workers.
/// Each call must only write state owned by index i. If any call throws, the
/// exception of the lowest failing index is rethrown after all workers join.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace sfopt
