#include "pmcw/sequences.hpp"

#include <algorithm>

#include "pmcw/error.hpp"

namespace pmcw {

std::vector<int> generate_mls(const LfsrSpec& spec)
{
    const int degree = spec.degree;
    if (degree < 2 || degree > 31) {
        throw Error("LFSR degree out of range");
    }
    if (spec.taps.empty()) {
        throw Error("LFSR needs at least one tap");
    }
    for (int t : spec.taps) {
        if (t < 1 || t > degree) {
            throw Error("LFSR tap outside register");
        }
    }
    if (!spec.seed.empty() && spec.seed.size() != static_cast<std::size_t>(degree)) {
        throw Error("LFSR seed length must equal degree");
    }

    const std::uint32_t mask = (std::uint32_t{1} << degree) - 1u;
    std::uint32_t tap_mask = 0;
    for (int t : spec.taps) {
        tap_mask ^= std::uint32_t{1} << (t - 1);
    }

    std::uint32_t state = 0;
    if (spec.seed.empty()) {
        state = mask;
    } else {
        for (int k = 0; k < degree; ++k) {
            if (spec.seed[k] != 0) {
                state |= std::uint32_t{1} << k;
            }
        }
    }
    if (state == 0) {
        throw Error("degenerate LFSR state");
    }

    const std::uint32_t start = state;
    const std::size_t period = mask;
    std::vector<int> chips;
    chips.reserve(period);
    for (std::size_t i = 0; i < period; ++i) {
        const int bit = static_cast<int>((state >> (degree - 1)) & 1u);
        chips.push_back(1 - 2 * bit);
        const std::uint32_t feedback = static_cast<std::uint32_t>(__builtin_parity(state & tap_mask));
        state = ((state << 1) | feedback) & mask;
        if (state == start && i + 1 < period) {
            throw Error("sequence period below maximum");
        }
    }
    if (state != start) {
        // Taps that leave the seed's cycle cannot be a primitive polynomial.
        throw Error("sequence period below maximum");
    }
    return chips;
}

PnSequence pad_sequence(std::span<const int> mls)
{
    if (mls.size() != 127) {
        throw Error("pad_sequence expects a 127-chip MLS");
    }
    PnSequence code;
    code.chips.assign(mls.begin(), mls.end());
    code.chips.push_back(mls.front());
    code.mls_len = mls.size();
    code.n_total = code.chips.size();
    return code;
}

PnSequence canonical_code()
{
    return pad_sequence(generate_mls(LfsrSpec{}));
}

std::vector<double> cyclic_autocorrelation(std::span<const int> seq)
{
    const std::size_t n = seq.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        long acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += seq[(i + n - r) % n] * seq[i];
        }
        out[r] = static_cast<double>(acc);
    }
    return out;
}

std::vector<std::complex<double>> cyclic_correlation_direct(std::span<const int> code,
                                                            std::span<const std::complex<double>> y)
{
    const std::size_t n = code.size();
    if (y.size() != n) {
        throw Error("correlation length mismatch");
    }
    std::vector<std::complex<double>> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i < n; ++i) {
            acc += static_cast<double>(code[(i + n - r) % n]) * y[i];
        }
        out[r] = acc;
    }
    return out;
}

} // namespace pmcw
