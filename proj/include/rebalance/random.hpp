#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rebalance {

/// Mixes a list of words into a single 64-bit stream key.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

/// splitmix64 generator: one word of state, so a stream per task is cheap to create.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/**
 * A reproducible random sequence identified by (seed, stream_key).
 *
 * Every task that needs randomness derives its own key from stable
 * identifiers (sampler, class, base row, ordinal) instead of sharing an
 * engine, so the values a task sees do not depend on scheduling or on
 * how many workers run.
 */
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t key);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t key() const { return key_; }

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n);
    double normal(double mean, double stddev);
    /// -1 or +1 with equal probability.
    int sign();

    SplitMix64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    SplitMix64 engine_;
};

}  // namespace rebalance
