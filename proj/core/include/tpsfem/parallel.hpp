#pragma once

#include <functional>

namespace tpsfem {

/// Worker count for parallel loops: the TPS_THREADS environment variable
/// when set to a positive integer, otherwise the hardware concurrency;
/// always at least 1.
int worker_count();

/// Runs fn(i) for i in [0, count) across worker threads. Iterations must be
/// independent; callers keep determinism by writing to per-index slots.
/// Exceptions from fn propagate to the caller (the first one thrown wins).
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace tpsfem
