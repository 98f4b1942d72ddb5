#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qlab {

// Runs body(chunk) for chunk in [0, chunk_count) on up to `workers` threads.
// Chunks are claimed dynamically, so callers that need bit-stable results
// must store per-chunk partials and fold them in chunk order afterwards.
template <class Body>
void parallel_chunks(std::size_t chunk_count, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || chunk_count <= 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) body(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= chunk_count) return;
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunk_count);
                return;
            }
        }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, chunk_count));
    {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(run);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace qlab
