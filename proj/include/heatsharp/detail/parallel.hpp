#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace heatsharp::detail {

/// Worker count for data-parallel loops. HEATSHARP_THREADS caps it when
/// set (minimum 1); otherwise the hardware count is used.
inline unsigned worker_count() {
    if (const char* env = std::getenv("HEATSHARP_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // unparsable value falls through to the hardware count
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Runs fn(begin, end) over a partition of [0, n). Each index is handled
/// by exactly one worker and every per-index computation owns its output
/// slot, so results are bit-identical for any worker count.
template <class Fn>
void parallel_for_ranges(std::size_t n, Fn&& fn) {
    const unsigned workers = worker_count();
    if (workers <= 1 || n < 4096) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        if (begin >= n) break;
        const std::size_t end = begin + chunk < n ? begin + chunk : n;
        pool.emplace_back([begin, end, &fn] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace heatsharp::detail
