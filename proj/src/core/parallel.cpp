#include "rebalance/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace rebalance {
namespace {

std::atomic<std::size_t> g_threads{0};

std::size_t default_thread_count() {
    if (const char* env = std::getenv("REBALANCE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void set_thread_count(std::size_t n) { g_threads.store(n); }

std::size_t thread_count() {
    const std::size_t n = g_threads.load();
    return n == 0 ? default_thread_count() : n;
}

}  // namespace rebalance
