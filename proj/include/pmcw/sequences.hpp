#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace pmcw {

/// Binary phase code: an MLS followed by one padding chip.
struct PnSequence {
    std::vector<int> chips;   // each chip is -1 or +1
    std::size_t mls_len = 0;  // length of the underlying MLS
    std::size_t n_total = 0;  // mls_len + 1

    std::size_t size() const noexcept { return chips.size(); }
};

/// Fibonacci LFSR parameters. Stage k (1-based) holds bit k-1 of the state;
/// the output is the last stage and the feedback XORs the tapped stages.
struct LfsrSpec {
    int degree = 7;
    std::vector<int> taps{7, 6};
    std::vector<std::uint8_t> seed;  // one bit per stage; empty means all ones
};

/// One full period of the LFSR as chips, bit b mapped to 1 - 2b.
/// Throws "degenerate LFSR state" for a zero seed and
/// "sequence period below maximum" when the taps are not primitive.
std::vector<int> generate_mls(const LfsrSpec& spec);

/// Appends a copy of chip 0. Input must have 127 chips.
PnSequence pad_sequence(std::span<const int> mls);

/// Degree-7, taps {7,6}, all-ones seed, padded to 128 chips.
PnSequence canonical_code();

/// Direct O(N^2) cyclic autocorrelation: r[k] = sum_n seq[(n-k) mod N] * seq[n].
std::vector<double> cyclic_autocorrelation(std::span<const int> seq);

/// Direct O(N^2) cyclic cross-correlation of a received column against a
/// code: p[r] = sum_n conj(code[(n-r) mod N]) * y[n]. Reference for the
/// transform-based range correlation.
std::vector<std::complex<double>> cyclic_correlation_direct(std::span<const int> code,
                                                            std::span<const std::complex<double>> y);

} // namespace pmcw
