#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sircov {

inline unsigned effective_threads(int requested) {
    if (requested > 0)
        return static_cast<unsigned>(requested);
    const unsigned hc = std::thread::hardware_concurrency();
    return hc != 0 ? hc : 1;
}

// Runs fn(worker, begin, end) over contiguous chunks of [0, n). Workers own
// disjoint ranges, so results indexed by position are thread-count invariant.
inline void parallel_chunks(std::uint64_t n, unsigned threads,
                            const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& fn) {
    if (n == 0)
        return;
    if (threads <= 1 || n == 1) {
        fn(0, 0, n);
        return;
    }
    const std::uint64_t nchunks = std::min<std::uint64_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    const std::uint64_t base = n / nchunks;
    const std::uint64_t extra = n % nchunks;
    std::uint64_t begin = 0;
    for (std::uint64_t i = 0; i < nchunks; ++i) {
        const std::uint64_t len = base + (i < extra ? 1 : 0);
        const std::uint64_t end = begin + len;
        pool.emplace_back([&fn, i, begin, end] { fn(static_cast<unsigned>(i), begin, end); });
        begin = end;
    }
    for (auto& t : pool)
        t.join();
}

}  // namespace sircov
