#include "pmcw/scene.hpp"

#include <cmath>
#include <numbers>

#include "pmcw/error.hpp"
#include "pmcw/rng.hpp"

namespace pmcw {

double RadarConfig::velocity_resolution_mps() const noexcept
{
    const double cpi = static_cast<double>(m_raw) * sequence_duration_s();
    return kSpeedOfLight / (2.0 * carrier_freq_hz * cpi);
}

void RadarConfig::validate() const
{
    if (!(chip_duration_s > 0.0) || !std::isfinite(chip_duration_s)) {
        throw Error("chip_duration_s must be positive");
    }
    if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz)) {
        throw Error("carrier_freq_hz must be positive");
    }
    if (n_fast == 0 || m_raw == 0 || accumulation == 0) {
        throw Error("n_fast, m_raw and accumulation must be nonzero");
    }
    if (m_raw % accumulation != 0) {
        throw Error("m_raw must be a multiple of accumulation");
    }
}

UnambiguousLimits unambiguous_limits(const RadarConfig& config)
{
    const double t_seq = config.sequence_duration_s();
    return {
        kSpeedOfLight * static_cast<double>(config.n_fast) * config.chip_duration_s / 2.0,
        kSpeedOfLight /
            (4.0 * config.carrier_freq_hz * static_cast<double>(config.accumulation) * t_seq),
    };
}

std::size_t range_bin(const RadarConfig& config, double range_m)
{
    const double delay = std::round(2.0 * range_m / (kSpeedOfLight * config.chip_duration_s));
    const auto n = static_cast<long long>(config.n_fast);
    return static_cast<std::size_t>(((static_cast<long long>(delay) % n) + n) % n);
}

double processing_gain(const RadarConfig& config)
{
    return static_cast<double>(config.accumulation) * static_cast<double>(config.n_fast);
}

double noise_variance(const RadarConfig& config, double snr_db)
{
    const double per_sample = std::pow(10.0, -snr_db / 10.0);
    return config.snr_reference == SnrReference::RangeProfile ? per_sample * processing_gain(config)
                                                               : per_sample;
}

std::complex<double> slow_time_phase_step(const RadarConfig& config, double velocity_mps)
{
    const double cycles =
        config.carrier_freq_hz * 2.0 * velocity_mps * config.sequence_duration_s() / kSpeedOfLight;
    return std::polar(1.0, -2.0 * std::numbers::pi * cycles);
}

namespace {

// exp(-j 2pi frac(cycles)); the integer part is dropped before scaling so
// large carrier phases keep full precision.
std::complex<double> phasor(double cycles)
{
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

} // namespace

AdcCube synthesize(const RadarConfig& config, const PnSequence& code, const Scene& scene)
{
    config.validate();
    if (code.size() != config.n_fast) {
        throw Error("code length does not match n_fast");
    }
    const auto limits = unambiguous_limits(config);
    for (const auto& target : scene.targets) {
        if (!(target.range_m >= 0.0) || !(target.range_m < limits.range_m)) {
            throw Error("range alias");
        }
        if (!(std::abs(target.velocity_mps) < limits.velocity_mps)) {
            throw Error("velocity alias");
        }
    }
    if (scene.snr_db && !std::isfinite(*scene.snr_db)) {
        throw Error("snr_db must be finite");
    }

    const std::size_t n_fast = config.n_fast;
    const std::size_t m_raw = config.m_raw;
    const double chip = config.chip_duration_s;
    const double t_seq = config.sequence_duration_s();
    const double fc = config.carrier_freq_hz;

    AdcCube cube{ComplexMatrix(n_fast, m_raw), false};
    std::vector<std::complex<double>> envelope(n_fast);
    std::vector<std::complex<double>> fast_phase(n_fast);
    for (const auto& target : scene.targets) {
        const std::size_t delay = range_bin(config, target.range_m);
        // Doppler cycles f_c * 2 v t / c0 split into the chip and pulse parts
        // of t_s so each factor is evaluated directly.
        const double doppler_hz = fc * 2.0 * target.velocity_mps / kSpeedOfLight;
        const std::complex<double> static_phase = phasor(fc * 2.0 * target.range_m / kSpeedOfLight);
        for (std::size_t n = 0; n < n_fast; ++n) {
            const double chip_value = code.chips[(n + n_fast - delay) % n_fast];
            fast_phase[n] = phasor(doppler_hz * static_cast<double>(n) * chip);
            envelope[n] = target.gamma * static_phase * chip_value * fast_phase[n];
        }
        for (std::size_t m = 0; m < m_raw; ++m) {
            const std::complex<double> pulse_phase = phasor(doppler_hz * static_cast<double>(m) * t_seq);
            auto col = cube.data.column(m);
            for (std::size_t n = 0; n < n_fast; ++n) {
                col[n] += envelope[n] * pulse_phase;
            }
        }
    }

    if (scene.snr_db) {
        const double variance = noise_variance(config, *scene.snr_db);
        PortableRng rng(scene.rng_seed);
        for (auto& sample : cube.data.values()) {
            sample += rng.complex_gaussian(variance);
        }
    }
    return cube;
}

} // namespace pmcw
