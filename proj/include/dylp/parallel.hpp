#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dylp {

/// Resolves a requested thread count; 0 means all hardware threads.
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `threads` contiguous chunks and runs
/// fn(chunk_index, begin, end) for each, returning when all are done.
/// Chunk boundaries depend only on (count, threads), so callers that merge
/// per-chunk results in chunk order get scheduling-independent output.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
    auto bounds = [&](std::size_t c) { return c * count / chunks; };
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, count);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    {
        std::vector<std::jthread> pool;
        pool.reserve(chunks);
        for (std::size_t c = 0; c < chunks; ++c) {
            pool.emplace_back([&, c] {
                try {
                    fn(c, bounds(c), bounds(c + 1));
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Number of chunks parallel_chunks will use.
inline std::size_t chunk_count(std::size_t count, unsigned threads) {
    return std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1));
}

}  // namespace dylp
