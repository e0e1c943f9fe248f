#pragma once

#include <cstddef>
#include <functional>

namespace mobius {

/// Worker count: MIL_THREADS if set and positive, else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, n). Every index is processed exactly once and
/// each body writes only its own outputs, so results do not depend on the
/// schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mobius
