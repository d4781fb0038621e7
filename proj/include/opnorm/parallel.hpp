#ifndef OPNORM_PARALLEL_HPP
#define OPNORM_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace opnorm {

// Worker cap: min(hardware_concurrency, OPNORM_THREADS). Always >= 1.
inline int thread_cap() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("OPNORM_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

// Runs body(chunk_index) for chunk_index in [0, n_chunks). Chunks may execute
// on any thread; the body must write results into per-chunk slots only, so
// the combined result does not depend on scheduling.
inline void for_each_chunk(std::int64_t n_chunks,
                           const std::function<void(std::int64_t)>& body) {
    int threads = thread_cap();
    if (threads <= 1 || n_chunks <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) body(c);
        return;
    }
    if (threads > n_chunks) threads = static_cast<int>(n_chunks);
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                body(c);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace opnorm

#endif
