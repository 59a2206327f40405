#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bubblefem {

/// Runs fn(i) for i in [0, n) on up to `threads` threads, contiguous blocks
/// per thread. The first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, std::max(1, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const int chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(n, begin + chunk);
            pool.emplace_back([&, begin, end] {
                try {
                    for (int i = begin; i < end; ++i) fn(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace bubblefem
