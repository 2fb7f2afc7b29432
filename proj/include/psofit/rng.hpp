#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace psofit {

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives the seed of restart `index` from a master seed.
constexpr std::uint64_t mix64(std::uint64_t master_seed, std::uint64_t index) noexcept
{
    return splitmix64_finalize(master_seed ^ index);
}

/// Random source owned by a single run.
///
/// The engine is the 64-bit Mersenne Twister (std::mt19937_64), whose raw
/// output sequence for a given integer seed is fixed by the C++ standard.
/// uniform01() maps the top 53 bits onto [0, 1) directly so positions and
/// pseudotimes are reproducible across standard libraries. Gamma and Poisson
/// draws go through the <random> distributions, which are only reproducible
/// within one standard library implementation.
class Rng
{
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    result_type operator()() { return engine_(); }

    /// Uniform draw on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform draw on [lo, hi); returns lo exactly when lo == hi.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

} // namespace psofit
