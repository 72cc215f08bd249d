#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmcw/matrix.hpp"
#include "pmcw/sequences.hpp"

namespace pmcw {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Where snr_db is measured for a unit-|gamma| target.
enum class SnrReference {
    RangeProfile,  // per range-profile cell: after accumulation and correlation
    Sample,        // per raw complex ADC sample
};

struct RadarConfig {
    double carrier_freq_hz = 79e9;
    double chip_duration_s = 10e-9;
    std::size_t n_fast = 128;
    std::size_t m_raw = 10240;
    std::size_t accumulation = 20;
    SnrReference snr_reference = SnrReference::RangeProfile;

    std::size_t m_slow() const noexcept { return accumulation == 0 ? 0 : m_raw / accumulation; }
    double sequence_duration_s() const noexcept
    {
        return static_cast<double>(n_fast) * chip_duration_s;
    }
    /// c0*T/2
    double range_resolution_m() const noexcept { return kSpeedOfLight * chip_duration_s / 2.0; }
    /// Velocity step of one Doppler bin after accumulation.
    double velocity_resolution_mps() const noexcept;

    /// Throws Error when the invariants (positive durations, m_raw = A * M) fail.
    void validate() const;
};

struct Target {
    double range_m = 0.0;
    double velocity_mps = 0.0;  // positive = receding
    std::complex<double> gamma{1.0, 0.0};
};

struct Scene {
    std::vector<Target> targets;
    std::optional<double> snr_db;  // nullopt: noiseless
    std::uint64_t rng_seed = 0;
};

/// Sampled baseband matrix: n_fast rows (fast time) by pulses columns.
struct AdcCube {
    ComplexMatrix data;
    bool quantized = false;
};

struct UnambiguousLimits {
    double range_m;
    double velocity_mps;  // half-width of the symmetric interval
};

/// range = c0*N*T/2, velocity = c0 / (4 f_c A T_seq).
UnambiguousLimits unambiguous_limits(const RadarConfig& config);

/// Integer chip delay round(2r/(c0 T)) taken modulo N.
std::size_t range_bin(const RadarConfig& config, double range_m);

/// Coherent gain A*N between a raw sample and a range-profile cell.
double processing_gain(const RadarConfig& config);

/// Per-sample noise variance sigma^2 for snr_db: 10^(-snr_db/10) for a unit
/// target, scaled by processing_gain when the SNR refers to the range profile.
double noise_variance(const RadarConfig& config, double snr_db);

/// Raw-pulse phase step exp(-j 2pi f_c 2 v T_seq / c0) for a target.
std::complex<double> slow_time_phase_step(const RadarConfig& config, double velocity_mps);

/// Receive matrix (n_fast x m_raw) for the scene. Each target contributes
/// gamma * code[(n - d) mod N] * exp(-j 2pi f_c tau(t_s)) with
/// tau(t) = 2r/c0 + 2vt/c0 and t_s = nT + m T_seq; noise is circular
/// complex Gaussian of variance noise_variance(config, snr), drawn column by
/// column.
AdcCube synthesize(const RadarConfig& config, const PnSequence& code, const Scene& scene);

} // namespace pmcw
