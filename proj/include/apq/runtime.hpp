#pragma once

#include <cstddef>
#include <functional>

namespace apq {

/// Global worker-thread count for element-parallel loops (default 1).
void set_thread_count(int n);
int thread_count();

/// Chunk size for element loops. Chunk boundaries are fixed so that
/// per-chunk partial sums merge in the same order for any thread count.
inline constexpr std::size_t kChunkSize = 2048;

std::size_t chunk_count(std::size_t n);

/// Runs fn(begin, end, chunk_index) over [0, n). Chunks may execute on
/// worker threads; boundaries and merge order never depend on timing.
void for_each_chunk(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace apq
