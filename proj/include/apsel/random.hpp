#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace apsel {

/// Seeded pseudo-random stream. Every stochastic operation takes one of these
/// explicitly so runs are reproducible from a single master seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    std::uint64_t next_u64() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Counter-keyed seed derivation (splitmix64 finalizer over master + index).
/// The result for a given (master, index) never depends on how many streams
/// are derived or in which order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Two-level derivation, used to key streams by purpose and then by index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index);

std::vector<RandomStream> seed_streams(std::uint64_t master, std::size_t n);

}  // namespace apsel
