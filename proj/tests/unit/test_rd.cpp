#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pmcw/error.hpp"
#include "pmcw/quantize.hpp"
#include "pmcw/rd.hpp"
#include "pmcw/rng.hpp"

using namespace pmcw;

namespace {

// Direct O(M^2) slow-time DFT, independent of the transform path.
std::vector<std::complex<double>> direct_dft(const std::vector<std::complex<double>>& x)
{
    const std::size_t m = x.size();
    std::vector<std::complex<double>> out(m);
    for (std::size_t v = 0; v < m; ++v) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i < m; ++i) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((v * i) % m) /
                                 static_cast<double>(m);
            acc += x[i] * std::polar(1.0, angle);
        }
        out[v] = acc;
    }
    return out;
}

AdcCube random_cube(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    PortableRng rng(seed);
    AdcCube cube{ComplexMatrix(rows, cols), false};
    for (auto& y : cube.data.values()) {
        y = rng.complex_gaussian(1.0);
    }
    return cube;
}

double peak_abs(const ComplexMatrix& m)
{
    double p = 0.0;
    for (const auto& q : m.values()) {
        p = std::max(p, std::abs(q));
    }
    return p;
}

std::pair<std::size_t, std::size_t> argmax(const ComplexMatrix& m)
{
    std::size_t best = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (std::abs(m.values()[i]) > std::abs(m.values()[best])) {
            best = i;
        }
    }
    return {best % m.rows(), best / m.rows()};
}

} // namespace

TEST_CASE("accumulate sums consecutive pulses")
{
    auto cube = random_cube(8, 60, 1);
    const auto acc = accumulate(cube, 20);
    REQUIRE(acc.data.cols() == 3);
    for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t n = 0; n < 8; ++n) {
            std::complex<double> expected{};
            for (std::size_t a = 0; a < 20; ++a) {
                expected += cube.data(n, m * 20 + a);
            }
            CHECK(std::abs(acc.data(n, m) - expected) < 1e-12);
        }
    }
    CHECK(accumulate(cube, 1).data == cube.data);
    CHECK_THROWS_AS(accumulate(cube, 7), Error);
    CHECK_THROWS_AS(accumulate(cube, 0), Error);

    cube.quantized = true;
    CHECK_FALSE(accumulate(cube, 20).quantized);
}

TEST_CASE("static target accumulates with exactly 20x amplitude")
{
    RadarConfig c;
    c.m_raw = 400;
    const auto cube = synthesize(c, canonical_code(), {{{25.0, 0.0, {0.7, 0.2}}}, std::nullopt, 0});
    const auto acc = accumulate(cube, 20);
    for (std::size_t m = 0; m < acc.data.cols(); ++m) {
        for (std::size_t n = 0; n < c.n_fast; ++n) {
            CHECK(std::abs(acc.data(n, m) - 20.0 * cube.data(n, 0)) < 1e-12);
        }
    }
}

TEST_CASE("range correlation: code and shifted code")
{
    const auto code = canonical_code();
    AdcCube cube{ComplexMatrix(128, 3), false};
    for (std::size_t n = 0; n < 128; ++n) {
        cube.data(n, 0) = code.chips[n];
        cube.data(n, 1) = code.chips[(n + 128 - 5) % 128];
        cube.data(n, 2) = code.chips[(n + 128 - 100) % 128];
    }
    const auto p = range_correlate(cube, code);
    const auto ac = cyclic_autocorrelation(code.chips);
    for (std::size_t r = 0; r < 128; ++r) {
        CHECK(std::abs(p.data(r, 0) - ac[r]) < 1e-9);
    }
    CHECK(std::abs(p.data(5, 1) - 128.0) < 1e-9);
    CHECK(std::abs(p.data(100, 2) - 128.0) < 1e-9);

    PnSequence wrong = code;
    wrong.chips.resize(64);
    CHECK_THROWS_AS(range_correlate(cube, wrong), Error);
}

TEST_CASE("range correlation matches the direct sum on random columns")
{
    const auto code = canonical_code();
    const auto cube = random_cube(128, 16, 7);
    const auto p = range_correlate(cube, code);
    for (std::size_t m = 0; m < 16; ++m) {
        const auto col = cube.data.column(m);
        const auto direct = cyclic_correlation_direct(code.chips, col);
        double scale = 0.0;
        double err = 0.0;
        for (std::size_t r = 0; r < 128; ++r) {
            scale = std::max(scale, std::abs(direct[r]));
            err = std::max(err, std::abs(direct[r] - p.data(r, m)));
        }
        CHECK(err / scale <= 1e-9);
    }
}

TEST_CASE("doppler DFT of constant and tone rows")
{
    const std::size_t m = 64;
    RangeProfile constant{ComplexMatrix(4, m)};
    RangeProfile tone{ComplexMatrix(4, m)};
    for (std::size_t i = 0; i < m; ++i) {
        constant.data(2, i) = 1.0;
        tone.data(1, i) = std::polar(1.0, 2.0 * std::numbers::pi * 9.0 * static_cast<double>(i) / m);
    }
    const auto q = doppler_dft(constant);
    CHECK_FALSE(q.normalized);
    CHECK(std::abs(q.data(2, 0)) == doctest::Approx(64.0));
    for (std::size_t v = 1; v < m; ++v) {
        CHECK(std::abs(q.data(2, v)) < 1e-9);
    }
    for (std::size_t r : {0u, 1u, 3u}) {
        for (std::size_t v = 0; v < m; ++v) {
            CHECK(std::abs(q.data(r, v)) == 0.0);
        }
    }
    const auto t = doppler_dft(tone);
    CHECK(std::abs(t.data(1, 9)) == doctest::Approx(64.0));
    CHECK(argmax(t.data) == std::pair<std::size_t, std::size_t>{1, 9});
}

TEST_CASE("doppler DFT matches the direct sum and satisfies Parseval")
{
    const auto profile = RangeProfile{random_cube(32, 48, 11).data};
    const auto q = doppler_dft(profile);
    for (std::size_t r = 0; r < 32; ++r) {
        std::vector<std::complex<double>> row(48);
        double energy = 0.0;
        for (std::size_t i = 0; i < 48; ++i) {
            row[i] = profile.data(r, i);
            energy += std::norm(row[i]);
        }
        const auto direct = direct_dft(row);
        double scale = 0.0;
        double err = 0.0;
        double map_energy = 0.0;
        for (std::size_t v = 0; v < 48; ++v) {
            scale = std::max(scale, std::abs(direct[v]));
            err = std::max(err, std::abs(direct[v] - q.data(r, v)));
            map_energy += std::norm(q.data(r, v));
        }
        CHECK(err / scale <= 1e-9);
        CHECK(std::abs(map_energy - 48.0 * energy) / (48.0 * energy) <= 1e-9);
    }
}

TEST_CASE("process composes the three stages")
{
    RadarConfig c;
    c.m_raw = 200;
    const auto code = canonical_code();
    const auto cube = synthesize(c, code, {{{17.0, 4.0, {0.3, 0.9}}}, 0.0, 3});
    const auto direct = doppler_dft(range_correlate(accumulate(cube, 20), code));
    CHECK(process(cube, code, c).data == direct.data);

    AdcCube wrong{ComplexMatrix(128, 100), false};
    CHECK_THROWS_AS(process(wrong, code, c), Error);
}

TEST_CASE("single static target peak equals N * A * M at (2, 0)")
{
    const RadarConfig c;
    const auto code = canonical_code();
    const double range = 2 * c.range_resolution_m();
    const auto carrier = std::polar(1.0, 2.0 * std::numbers::pi * c.carrier_freq_hz * 2.0 * range / kSpeedOfLight);
    const auto map = process(synthesize(c, code, {{{range, 0.0, carrier}}, std::nullopt, 0}), code, c);
    CHECK(argmax(map.data) == std::pair<std::size_t, std::size_t>{2, 0});
    CHECK(std::abs(map.data(2, 0) - 128.0 * 20.0 * 512.0) / (128.0 * 20.0 * 512.0) < 1e-9);
    // Off-zero Doppler bins carry nothing for a static target.
    CHECK(std::abs(map.data(2, 1)) < 1e-6);
}

TEST_CASE("empty noiseless scene gives an all-zero map")
{
    RadarConfig c;
    c.m_raw = 100;
    const auto map = process(synthesize(c, canonical_code(), {{}, std::nullopt, 0}), canonical_code(), c);
    CHECK(peak_abs(map.data) == 0.0);
}

TEST_CASE("pipeline is linear on full-precision data")
{
    RadarConfig c;
    c.m_raw = 400;
    const auto code = canonical_code();
    const Target a{31.0, 9.0, {1.0, 0.0}};
    const Target b{90.0, -20.0, {0.0, 0.5}};
    auto sum = process(synthesize(c, code, {{a}, std::nullopt, 0}), code, c).data;
    sum += process(synthesize(c, code, {{b}, std::nullopt, 0}), code, c).data;
    const auto both = process(synthesize(c, code, {{a, b}, std::nullopt, 0}), code, c).data;
    double err = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        err = std::max(err, std::abs(sum.values()[i] - both.values()[i]));
    }
    CHECK(err / peak_abs(both) <= 1e-9);
}

TEST_CASE("doppler bin helpers are consistent with the phase step")
{
    const RadarConfig c;
    for (std::size_t bin : {0u, 1u, 100u, 255u, 257u, 511u}) {
        const double v = velocity_for_doppler_bin(c, bin);
        CHECK(std::abs(v) < unambiguous_limits(c).velocity_mps);
        CHECK(doppler_bin_from_phase_step(slow_time_phase_step(c, v), c.accumulation, c.m_slow()) == bin);
    }
    // A receding target lands in the upper (negative-frequency) half.
    CHECK(doppler_bin_from_phase_step(slow_time_phase_step(c, 5.0), 20, 512) > 256);
}

TEST_CASE("moving target peaks on its predicted cell")
{
    RadarConfig c;
    c.m_raw = 2560;  // M = 128
    const auto code = canonical_code();
    const std::size_t bin = 37;
    const double v = velocity_for_doppler_bin(c, bin);
    const double range = 50 * c.range_resolution_m();
    const auto map = process(synthesize(c, code, {{{range, v, {1.0, 0.0}}}, std::nullopt, 0}), code, c);
    CHECK(argmax(map.data) == std::pair<std::size_t, std::size_t>{50, bin});
}
