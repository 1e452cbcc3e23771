#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace lambda_lab {

/// Worker count: LAMBDA_LAB_THREADS caps parallelism, 0 or unset means hardware concurrency.
inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LAMBDA_LAB_THREADS")) {
        try {
            long requested = std::stol(env);
            if (requested > 0) return static_cast<unsigned>(requested);
        } catch (...) {
        }
    }
    return hw;
}

/// Runs body(i) for i in [0, n). Each index is visited exactly once; body must not
/// write shared state except through its own index.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace lambda_lab
