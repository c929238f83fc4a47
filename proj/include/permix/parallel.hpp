#pragma once
// Deterministic task-parallel loop: tasks own their index-derived RNG stream
// and write to their own output slot, so results are identical for any
// worker count.

#include <atomic>
#include <thread>
#include <vector>

namespace permix {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

template <class F>
void parallel_for(long long count, int workers, F&& body) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count <= 1) {
        for (long long i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                long long i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

} // namespace permix
