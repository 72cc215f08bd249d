#include "pmcw/quantize.hpp"

#include <algorithm>

#include "pmcw/error.hpp"

namespace pmcw {

AdcCube one_bit(const AdcCube& cube)
{
    if (cube.quantized) {
        throw Error("double quantization");
    }
    AdcCube out{ComplexMatrix(cube.data.rows(), cube.data.cols()), true};
    std::ranges::transform(cube.data.values(), out.data.values().begin(), one_bit_value);
    return out;
}

} // namespace pmcw
