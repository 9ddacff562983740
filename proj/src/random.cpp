#include "apsel/random.hpp"

namespace apsel {

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64(splitmix64(master) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index)
{
    return derive_seed(derive_seed(master, purpose), index);
}

std::vector<RandomStream> seed_streams(std::uint64_t master, std::size_t n)
{
    std::vector<RandomStream> streams;
    streams.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        streams.emplace_back(derive_seed(master, i));
    return streams;
}

}  // namespace apsel
