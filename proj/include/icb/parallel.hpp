#pragma once
// Index-space parallel loop. Results must be written to per-index slots by the
// caller; chunk assembly order never influences output. ICB_THREADS caps the
// worker count (0 or unset = hardware concurrency). Nested calls run serially
// on the calling thread.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace icb {

inline unsigned env_thread_cap() {
    if (const char* s = std::getenv("ICB_THREADS")) {
        long v = std::strtol(s, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0; // auto
}

inline unsigned resolve_threads(unsigned requested) {
    unsigned cap = requested != 0 ? requested : env_thread_cap();
    if (cap == 0) cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    return cap;
}

namespace detail {
inline bool& in_parallel_region() {
    thread_local bool flag = false;
    return flag;
}
} // namespace detail

// Calls fn(i) for i in [0, n). fn must be safe to run concurrently for
// distinct i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
    if (n == 0) return;
    unsigned workers = resolve_threads(threads);
    if (workers <= 1 || n == 1 || detail::in_parallel_region()) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            detail::in_parallel_region() = true;
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace icb
