#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace eh {

inline int default_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Run fn(i) for i in [0, count) across `threads` workers and reduce the
// per-item results strictly in index order, so the outcome is identical for
// any thread count.
template <typename T, typename Fn, typename Reduce>
T parallel_map_reduce(std::size_t count, int threads, T init, Fn&& fn, Reduce&& reduce) {
    if (threads < 1) threads = 1;
    std::vector<T> results(count, init);
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < count;
                     i += static_cast<std::size_t>(threads))
                    results[i] = fn(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    T acc = init;
    for (std::size_t i = 0; i < count; ++i) acc = reduce(acc, results[i]);
    return acc;
}

} // namespace eh
