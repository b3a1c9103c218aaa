#pragma once
// Bulk-synchronous parallel_for over an index range. Thread count comes from
// DBAR2_THREADS (default: hardware concurrency). Work item i writes only its
// own output slot, so results are deterministic regardless of scheduling.
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>
#include <atomic>

namespace dbar2 {

inline unsigned thread_count() {
    if (const char* env = std::getenv("DBAR2_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1 && n <= 256) return static_cast<unsigned>(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : (hc > 16 ? 16 : hc);
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned nt = thread_count();
    if (nt <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (unsigned t = 0; t < nt; ++t)
        workers.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& w : workers) w.join();
}

} // namespace dbar2
