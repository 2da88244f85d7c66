#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rebalance {

/// Number of workers used by parallel loops. 0 restores the default
/// (REBALANCE_THREADS if set, otherwise hardware concurrency).
void set_thread_count(std::size_t n);
std::size_t thread_count();

/**
 * Runs body(i) for i in [0, n) over a static partition of the range.
 *
 * Bodies must only write to per-index state; output order is then
 * identical at any worker count. The first exception thrown by any
 * worker is rethrown on the calling thread.
 */
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 16) {
    const std::size_t workers =
        std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rebalance
