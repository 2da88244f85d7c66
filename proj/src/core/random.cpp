#include "rebalance/random.hpp"

#include <cassert>

namespace rebalance {
namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t p : parts) h = mix(h ^ mix(p));
    return h;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t key)
    : seed_(seed), key_(key), engine_(mix(seed ^ mix(key))) {}

double RandomStream::uniform() {
    // top 53 bits -> [0, 1); never returns 1.0
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t RandomStream::index(std::size_t n) {
    assert(n > 0);
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

double RandomStream::normal(double mean, double stddev) {
    if (stddev == 0.0) return mean;
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
}

int RandomStream::sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

}  // namespace rebalance
