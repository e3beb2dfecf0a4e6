#ifndef MOBOPT_PARALLEL_HPP
#define MOBOPT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mobopt {

/// Worker-thread cap: ARS_MOBOPT_THREADS if set, else hardware concurrency.
int max_threads();

/// Run fn(i) for i in [0, n). Each index writes only its own outputs, so
/// results are identical to the serial loop regardless of scheduling.
/// Nested calls from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace mobopt

#endif
