#pragma once

#include <cstddef>
#include <functional>

namespace cover {

/// Worker cap: COVER_THREADS env var, then set_max_threads(), then
/// hardware_concurrency. Always at least 1.
int max_threads();
void set_max_threads(int n);

/// Runs work(0..n_chunks-1) on up to max_threads() workers. Chunk
/// decomposition is fixed by the caller, so results do not depend on the
/// worker count; work must only touch chunk-local state.
void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& work);

} // namespace cover
