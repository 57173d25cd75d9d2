#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace howde {

// Worker count from HOWDE_THREADS, falling back to hardware concurrency.
int default_threads();

// Calls fn(i) for i in [0, n) on up to `threads` workers. Work items are
// claimed dynamically; callers write results into pre-sized slots so output
// never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Independent 64-bit seed for stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace howde
