#ifndef PLATEAU_PARALLEL_HPP
#define PLATEAU_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace plateau {

/// Thread cap from PLATEAU_THREADS (default: hardware concurrency).
inline unsigned thread_cap()
{
    if (const char* env = std::getenv("PLATEAU_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Index-parallel loop with deterministic slot-indexed writes; falls back
/// to the serial loop for small ranges or a cap of one.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    unsigned cap = thread_cap();
    if (cap <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<unsigned>(cap, 8);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace plateau

#endif
