#include "pmcw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "pmcw/error.hpp"

namespace pmcw {
namespace {

std::size_t cyclic_distance(std::size_t a, std::size_t b, std::size_t n)
{
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, n - d);
}

std::size_t column_argmax(const RdMap& map, std::size_t doppler_bin)
{
    if (doppler_bin >= map.data.cols()) {
        throw Error("doppler bin out of range");
    }
    const auto col = map.data.column(doppler_bin);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t r = 0; r < col.size(); ++r) {
        const double mag = std::abs(col[r]);
        if (mag > best_mag) {
            best_mag = mag;
            best = r;
        }
    }
    if (!(best_mag > 0.0)) {
        throw Error("column of zeros");
    }
    return best;
}

std::string format_db(double value)
{
    if (std::isinf(value) && value < 0) {
        return "-inf";
    }
    return fmt::format("{:.6f}", value);
}

} // namespace

RdMap normalize_peak(const RdMap& map)
{
    double peak = 0.0;
    for (const auto& q : map.data.values()) {
        peak = std::max(peak, std::abs(q));
    }
    if (!(peak > 0.0)) {
        throw Error("degenerate map");
    }
    RdMap out{map.data, true};
    for (auto& q : out.data.values()) {
        q /= peak;
    }
    return out;
}

double mse(const RdMap& a, const RdMap& b)
{
    if (a.data.rows() != b.data.rows() || a.data.cols() != b.data.cols()) {
        throw Error("map dimension mismatch");
    }
    if (!a.normalized || !b.normalized) {
        throw Error("mse requires normalized maps");
    }
    const auto va = a.data.values();
    const auto vb = b.data.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = std::abs(va[i]) - std::abs(vb[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(va.size());
}

PslResult psl(const RdMap& map, std::size_t doppler_bin, std::size_t guard)
{
    const std::size_t peak = column_argmax(map, doppler_bin);
    const auto col = map.data.column(doppler_bin);
    double side = 0.0;
    for (std::size_t r = 0; r < col.size(); ++r) {
        if (cyclic_distance(r, peak, col.size()) > guard) {
            side = std::max(side, std::abs(col[r]));
        }
    }
    return {20.0 * std::log10(side), peak};
}

double isl(const RdMap& map, std::size_t doppler_bin, std::size_t guard, bool power_db)
{
    const std::size_t peak = column_argmax(map, doppler_bin);
    const auto col = map.data.column(doppler_bin);
    double energy = 0.0;
    for (std::size_t r = 0; r < col.size(); ++r) {
        if (cyclic_distance(r, peak, col.size()) > guard) {
            energy += std::norm(col[r]);
        }
    }
    if (energy == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return (power_db ? 10.0 : 20.0) * std::log10(energy);
}

std::size_t peak_doppler_bin(const RdMap& map)
{
    const auto values = map.data.values();
    if (values.empty()) {
        throw Error("empty map");
    }
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double mag = std::abs(values[i]);
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    return best / map.data.rows();
}

MetricReport evaluate(const RdMap& candidate, const RdMap& reference, const MetricOptions& options)
{
    const RdMap cand = candidate.normalized ? candidate : normalize_peak(candidate);
    const RdMap ref = reference.normalized ? reference : normalize_peak(reference);

    MetricReport report;
    report.guard = options.guard;
    report.isl_power_db = options.isl_power_db;
    report.mse = mse(cand, ref);
    report.doppler_bin = options.doppler_bin.value_or(peak_doppler_bin(cand));
    const auto side = psl(cand, report.doppler_bin, options.guard);
    report.psl_db = side.psl_db;
    report.peak_range_bin = side.peak_range_bin;
    report.isl_db = isl(cand, report.doppler_bin, options.guard, options.isl_power_db);
    return report;
}

std::string MetricReport::to_key_value() const
{
    return fmt::format("normalization = peak_amplitude\n"
                       "mse = {:.9e}\n"
                       "psl_db = {}\n"
                       "isl_db = {}\n"
                       "isl_form = {}\n"
                       "doppler_bin = {}\n"
                       "peak_range_bin = {}\n"
                       "guard = {}\n",
                       mse, format_db(psl_db), format_db(isl_db),
                       isl_power_db ? "10log10" : "20log10", doppler_bin, peak_range_bin, guard);
}

std::string MetricReport::csv_header()
{
    return "schema_version,variant,mse,psl_db,isl_db,isl_form,doppler_bin,peak_range_bin,guard";
}

std::string MetricReport::to_csv_row(const std::string& variant) const
{
    return fmt::format("{},{},{:.9e},{},{},{},{},{},{}", kCsvSchemaVersion, variant, mse,
                       format_db(psl_db), format_db(isl_db), isl_power_db ? "10log10" : "20log10",
                       doppler_bin, peak_range_bin, guard);
}

} // namespace pmcw
