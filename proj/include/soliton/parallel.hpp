#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace soliton {

// Worker count: min(hardware_concurrency, SOLITON_LAB_THREADS if set). At
// least 1.
int thread_count();

// Runs fn(begin, end, chunk_index) over consecutive fixed-size chunks of
// [0, n). Chunk boundaries depend only on n, never on the worker count, so a
// caller that stores per-chunk partial results and combines them in chunk
// order gets floating-point output independent of SOLITON_LAB_THREADS.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
    return n == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
}

// Deterministic parallel sum: partials per fixed chunk, combined in order.
double parallel_sum(std::size_t n, std::size_t chunk_size,
                    const std::function<double(std::size_t, std::size_t)>& piece);

} // namespace soliton
