#pragma once

#include "pmcw/matrix.hpp"
#include "pmcw/scene.hpp"
#include "pmcw/sequences.hpp"

namespace pmcw {

/// Fast-time correlation output P (range bins x pulses).
struct RangeProfile {
    ComplexMatrix data;
};

/// Range-Doppler map Q (range bins x Doppler bins), Doppler bin 0 first.
struct RdMap {
    ComplexMatrix data;
    bool normalized = false;
};

/// Coherent sum of each run of `factor` consecutive pulses. The result is
/// never flagged quantized, even for one-bit input.
AdcCube accumulate(const AdcCube& cube, std::size_t factor);

/// p_rm = sum_n conj(x[(n-r) mod N]) y_nm, evaluated per column as
/// IFFT(FFT(y) * conj(FFT(x))).
RangeProfile range_correlate(const AdcCube& cube, const PnSequence& code);

/// q_rv = sum_m p_rm exp(-j 2pi v m / M); no window, no shift.
RdMap doppler_dft(const RangeProfile& profile);

/// doppler_dft(range_correlate(accumulate(cube, A), code)).
RdMap process(const AdcCube& cube, const PnSequence& code, const RadarConfig& config);

/// Doppler bin in [0, M) where a target with the given raw-pulse phase step
/// lands after accumulation by A and an M-point DFT.
std::size_t doppler_bin_from_phase_step(std::complex<double> raw_step, std::size_t accumulation,
                                        std::size_t m_slow);

/// Radial velocity whose Doppler peak falls exactly on `bin`, taking bins
/// above M/2 as negative frequencies.
double velocity_for_doppler_bin(const RadarConfig& config, std::size_t bin);

} // namespace pmcw
