#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace spectrafrac {

inline unsigned resolve_jobs(unsigned jobs) {
    if (jobs != 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Index-based parallel loop. Each index is processed exactly once and results
// must be written by index, so output is independent of the job count.
template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
    jobs = resolve_jobs(jobs);
    if (n == 0) return;
    if (jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (jobs > n) jobs = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    std::size_t chunk = (n + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        std::size_t lo = static_cast<std::size_t>(t) * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace spectrafrac
