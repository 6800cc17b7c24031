#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace camo {

// Calls fn(i) for every i in [0, n), split into contiguous chunks over up to
// `threads` workers. fn must only write state owned by index i.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(n, threads < 1 ? 1 : static_cast<std::size_t>(threads));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
}

}  // namespace camo
