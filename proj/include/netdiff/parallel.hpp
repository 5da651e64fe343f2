#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace netdiff {

// 0 means "use hardware concurrency".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is visited
// exactly once; results must be written to per-index slots so the outcome is
// independent of the schedule. Reductions stay with the caller, in serial code.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2048) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& w : workers) w.join();
}

} // namespace netdiff
