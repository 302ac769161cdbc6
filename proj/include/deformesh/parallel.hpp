#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace deformesh {

/// Runs f(i) for i in [0, n) over `threads` contiguous chunks. Work items must
/// write to disjoint outputs; the result is then independent of the thread count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    const std::size_t workers = std::min<std::size_t>(threads > 1 ? threads : 1, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([begin, end, &f] {
            for (std::size_t i = begin; i < end; ++i)
                f(i);
        });
    }
}

/// Thread cap from DEFORMESH_THREADS; 1 when unset or invalid.
int threads_from_env();

}  // namespace deformesh
