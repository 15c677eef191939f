#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace wedgespec::detail {

// Thread budget for row-parallel assembly. WEDGE_SPECTRA_THREADS caps it;
// unset or invalid falls back to hardware concurrency.
inline int thread_cap() {
    static const int cap = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("WEDGE_SPECTRA_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) return static_cast<int>(std::min<long>(v, 256));
        }
        return hw;
    }();
    return cap;
}

// Runs body(i) for i in [0, n). Partition is static, so results are
// deterministic as long as each i writes to its own slots.
template <typename F>
void parallel_for(int n, F&& body) {
    const int threads = std::min(thread_cap(), n);
    if (threads <= 1 || n < 4) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wedgespec::detail
