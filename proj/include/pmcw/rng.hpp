#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace pmcw {

/// SplitMix64 finalizer; used to derive independent per-record seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Portable random source: std::mt19937_64 (its output sequence is fixed by
/// the standard) with explicit uniform and Box-Muller conversions, since the
/// standard distributions are implementation-defined.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] by rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return lo + static_cast<std::int64_t>(x % span);
    }

    /// Circular complex Gaussian with E|z|^2 = variance (variance/2 per part).
    /// One Box-Muller pair feeds the real and imaginary parts.
    std::complex<double> complex_gaussian(double variance)
    {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-std::log(u1) * variance);
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace pmcw
