#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "pmcw/rd.hpp"

namespace pmcw {

/// Evaluation results on a peak-normalized map. isl_db may be -infinity
/// when every sidelobe is exactly zero.
struct MetricReport {
    double mse = 0.0;
    double psl_db = 0.0;
    double isl_db = 0.0;
    std::size_t doppler_bin = 0;
    std::size_t peak_range_bin = 0;
    std::size_t guard = 0;
    bool isl_power_db = false;

    /// `key = value` lines, one per field, plus the normalization convention.
    std::string to_key_value() const;
    static std::string csv_header();
    std::string to_csv_row(const std::string& variant) const;
};

struct MetricOptions {
    std::size_t guard = 0;
    /// Use 10*log10 for ISL instead of the 20*log10 printed form.
    bool isl_power_db = false;
    /// Column to evaluate; defaults to the column holding the global peak.
    std::optional<std::size_t> doppler_bin;
};

inline constexpr int kCsvSchemaVersion = 1;

/// Divides by max |q|. Throws "degenerate map" when the map is all zero.
RdMap normalize_peak(const RdMap& map);

/// (1/NM) sum (|a| - |b|)^2 on two normalized maps.
double mse(const RdMap& a, const RdMap& b);

struct PslResult {
    double psl_db;
    std::size_t peak_range_bin;
};

/// Peak sidelobe of one Doppler column: 20 log10 max_{|r - r_hat| > guard} |q|,
/// distance measured cyclically.
PslResult psl(const RdMap& map, std::size_t doppler_bin, std::size_t guard = 0);

/// Integrated sidelobe of one Doppler column, 20 log10 (or 10 log10 with
/// power_db) of sum |q|^2 outside the guard window. Returns -infinity when
/// that sum is zero.
double isl(const RdMap& map, std::size_t doppler_bin, std::size_t guard = 0, bool power_db = false);

/// Doppler column containing the largest magnitude.
std::size_t peak_doppler_bin(const RdMap& map);

/// Normalizes both maps and fills every field of the report.
MetricReport evaluate(const RdMap& candidate, const RdMap& reference, const MetricOptions& options = {});

} // namespace pmcw
