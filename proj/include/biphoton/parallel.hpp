#ifndef BIPHOTON_PARALLEL_HPP
#define BIPHOTON_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace biphoton {

/// Worker count for sweeps: BIPHOTON_THREADS if set and positive, otherwise
/// the hardware concurrency (at least one).
unsigned sweep_threads();

/// Calls body(i) for every i in [0, count) across sweep_threads() workers.
/// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace biphoton

#endif
