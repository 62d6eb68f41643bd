#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace episis {

/// One step of the splitmix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` under `master`: the (index+1)-th output of a
/// splitmix64 sequence started at `master`. Used for per-realization streams.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * index);
}

/// 64-bit Mersenne Twister with portable variate conversions.
///
/// The std distributions are implementation-defined, so uniform, exponential
/// and index draws are done here to keep runs bit-reproducible across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate (> 0).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// Uniform integer on [0, n), n > 0.
    std::uint64_t index(std::uint64_t n)
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace episis
