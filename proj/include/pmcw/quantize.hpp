#pragma once

#include <complex>

#include "pmcw/scene.hpp"

namespace pmcw {

/// sign(x) = +1 for x >= 0, -1 otherwise.
constexpr double one_bit_sign(double x) noexcept { return x >= 0.0 ? 1.0 : -1.0; }

constexpr std::complex<double> one_bit_value(std::complex<double> y) noexcept
{
    return {one_bit_sign(y.real()), one_bit_sign(y.imag())};
}

/// Complex one-bit quantizer sign(Re y) + j sign(Im y). Throws
/// "double quantization" if the cube is already quantized.
AdcCube one_bit(const AdcCube& cube);

} // namespace pmcw
