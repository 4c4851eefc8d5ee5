#pragma once

#include <cstddef>
#include <functional>

namespace cayperc {

/// Environment variable selecting the worker count. Unset or 0 means all
/// available cores. Results never depend on it.
inline constexpr const char* kThreadsEnv = "CAYPERC_THREADS";

/// Worker count from CAYPERC_THREADS, or a process-wide override.
std::size_t worker_count();

/// Overrides the environment for the rest of the process (0 restores it).
void set_worker_count(std::size_t workers);

/// Runs task(i) for i in [0, n). Tasks must write only to their own slot;
/// callers reduce in index order afterwards. If tasks throw, the exception of
/// the lowest failing index seen is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace cayperc
