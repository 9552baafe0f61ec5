#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace dxnn {

using Rng = std::mt19937_64;

inline double uniform_real(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Uniform integer in [lo, hi] (inclusive).
inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return uniform_int(rng, 0, n - 1);
}

inline bool bernoulli(Rng& rng, double p)
{
    if (p <= 0.0)
        return false;
    if (p >= 1.0)
        return true;
    return std::bernoulli_distribution(p)(rng);
}

// Independent stream for repetition `index` of an experiment seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

} // namespace dxnn
