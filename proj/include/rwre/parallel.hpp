#pragma once

// Deterministic parallel loop: every index writes to its own slot, so results
// are independent of scheduling and thread count. Reductions happen after the
// loop, in index order.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rwre {

inline int default_threads() {
    if (const char* s = std::getenv("RWRE_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int& thread_count_ref() {
    static int n = default_threads();
    return n;
}
inline void set_threads(int n) { thread_count_ref() = n < 1 ? 1 : n; }
inline int threads() { return thread_count_ref(); }

inline void parallel_for(long n, const std::function<void(long)>& body) {
    const int nt = std::min<long>(threads(), n) < 1 ? 1 : static_cast<int>(std::min<long>(threads(), n));
    if (nt == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int w = 0; w < nt; ++w) {
        pool.emplace_back([=, &body] {
            for (long i = w; i < n; i += nt) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace rwre
