#pragma once

#include <cstddef>
#include <functional>

namespace mfchaos {

/// Worker count: MFCHAOS_THREADS if set and positive, else the hardware count.
std::size_t thread_count();

/// Override the worker count for this process (0 restores the default).
void set_thread_count(std::size_t n);

/// Run body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots so the outcome is independent of
/// scheduling. Exceptions are rethrown on the calling thread (lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mfchaos
