#include "pmcw/rd.hpp"

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "pmcw/error.hpp"
#include "pmcw/fft.hpp"

namespace pmcw {
namespace {

// Runs body(begin, end) over [0, count) on a few worker threads.
template <typename Body>
void parallel_chunks(std::size_t count, Body body)
{
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, count / 64 + 1);
    if (workers <= 1) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end) {
            pool.emplace_back([=] { body(begin, end); });
        }
    }
}

} // namespace

AdcCube accumulate(const AdcCube& cube, std::size_t factor)
{
    const std::size_t cols = cube.data.cols();
    if (factor == 0 || cols % factor != 0) {
        throw Error("pulse count not divisible by accumulation factor");
    }
    const std::size_t rows = cube.data.rows();
    AdcCube out{ComplexMatrix(rows, cols / factor), false};
    for (std::size_t m = 0; m < out.data.cols(); ++m) {
        auto dst = out.data.column(m);
        for (std::size_t a = 0; a < factor; ++a) {
            auto src = cube.data.column(m * factor + a);
            for (std::size_t n = 0; n < rows; ++n) {
                dst[n] += src[n];
            }
        }
    }
    return out;
}

RangeProfile range_correlate(const AdcCube& cube, const PnSequence& code)
{
    const std::size_t n = cube.data.rows();
    if (code.size() != n) {
        throw Error("code length does not match fast-time length");
    }
    std::vector<std::complex<double>> kernel(code.chips.begin(), code.chips.end());
    fft::transform(kernel, fft::Direction::Forward);
    for (auto& k : kernel) {
        k = std::conj(k) / static_cast<double>(n);
    }

    RangeProfile profile{cube.data};
    parallel_chunks(profile.data.cols(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            auto col = profile.data.column(m);
            fft::transform(col, fft::Direction::Forward);
            for (std::size_t i = 0; i < n; ++i) {
                col[i] *= kernel[i];
            }
            fft::transform(col, fft::Direction::Inverse);
        }
    });
    return profile;
}

RdMap doppler_dft(const RangeProfile& profile)
{
    const std::size_t rows = profile.data.rows();
    const std::size_t cols = profile.data.cols();
    RdMap map{ComplexMatrix(rows, cols), false};
    parallel_chunks(rows, [&](std::size_t begin, std::size_t end) {
        std::vector<std::complex<double>> slow(cols);
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t m = 0; m < cols; ++m) {
                slow[m] = profile.data(r, m);
            }
            fft::transform(slow, fft::Direction::Forward);
            for (std::size_t v = 0; v < cols; ++v) {
                map.data(r, v) = slow[v];
            }
        }
    });
    return map;
}

RdMap process(const AdcCube& cube, const PnSequence& code, const RadarConfig& config)
{
    config.validate();
    if (cube.data.rows() != config.n_fast || cube.data.cols() != config.m_raw) {
        throw Error("cube dimensions do not match the radar configuration");
    }
    return doppler_dft(range_correlate(accumulate(cube, config.accumulation), code));
}

std::size_t doppler_bin_from_phase_step(std::complex<double> raw_step, std::size_t accumulation,
                                        std::size_t m_slow)
{
    // Accumulated pulses advance by A raw steps; the DFT kernel e^{-j2pi vm/M}
    // peaks where 2pi v / M equals that phase advance.
    const double turns = std::arg(raw_step) * static_cast<double>(accumulation) /
                         (2.0 * std::numbers::pi);
    const double bin = std::round(turns * static_cast<double>(m_slow));
    const auto m = static_cast<long long>(m_slow);
    return static_cast<std::size_t>(((static_cast<long long>(bin) % m) + m) % m);
}

double velocity_for_doppler_bin(const RadarConfig& config, std::size_t bin)
{
    const std::size_t m_slow = config.m_slow();
    const double signed_bin = bin <= m_slow / 2 ? static_cast<double>(bin)
                                                : static_cast<double>(bin) - static_cast<double>(m_slow);
    // Phase step per raw pulse is -2pi f_c 2 v T_seq / c0, so bin v needs
    // v_r = -v c0 / (2 f_c A T_seq M).
    return -signed_bin * config.velocity_resolution_mps();
}

} // namespace pmcw
