#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pmcw/config.hpp"
#include "pmcw/metrics.hpp"
#include "pmcw/rd.hpp"

namespace pmcw::cli {

/// hr: full-precision ADC at the reference SNR (the ground truth the other
/// variants are compared against). onebit: one-bit ADC at the scene SNR.
enum class Variant { Hr, OneBit };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

inline constexpr double kSliceFloorDb = -50.0;

/// Receive cube for a variant; hr noise uses dataset::reference_noise_seed.
AdcCube simulate_variant(const ScenarioConfig& cfg, Variant variant);

/// Un-normalized range-Doppler map for a variant.
RdMap run_variant(const ScenarioConfig& cfg, Variant variant);

/// Metrics of `variant` against the hr map of the same scene.
MetricReport run_metrics(const ScenarioConfig& cfg, Variant variant);

struct SliceTable {
    std::size_t doppler_bin = 0;
    std::vector<Variant> variants;
    std::vector<std::vector<double>> amplitude_db;  // [variant][range_bin]

    std::string to_csv() const;
};

/// Range cut through the target's Doppler column (taken from the hr map's
/// peak) for each variant, peak-normalized, in dB floored at -50.
SliceTable run_slice(const ScenarioConfig& cfg, const std::vector<Variant>& variants);

/// Entry point shared by the executable and the tests. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pmcw::cli
