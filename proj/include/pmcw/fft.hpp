#pragma once

#include <complex>
#include <span>

namespace pmcw::fft {

enum class Direction { Forward, Inverse };

/// Unnormalized in-place DFT of length data.size():
/// forward X[k] = sum x[n] e^{-j2pi kn/L}, inverse uses e^{+j2pi kn/L}.
/// Plans are cached per (length, direction) and shared across threads.
void transform(std::span<std::complex<double>> data, Direction dir);

} // namespace pmcw::fft
