#include "pmcw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "pmcw/dataset.hpp"
#include "pmcw/error.hpp"
#include "pmcw/quantize.hpp"

namespace pmcw::cli {
namespace {

double floored_db(double amplitude)
{
    if (!(amplitude > 0.0)) {
        return kSliceFloorDb;
    }
    return std::max(kSliceFloorDb, 20.0 * std::log10(amplitude));
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::trunc);
    out << text;
    if (!out) {
        throw Error(fmt::format("write failed: '{}'", path.string()));
    }
}

dataset::DenseArray full_precision_array(const ComplexMatrix& data)
{
    // Same layout as dataset::map_to_array.
    return dataset::map_to_array(RdMap{data, false});
}

std::string code_csv(const PnSequence& code)
{
    std::string text = "index,chip\n";
    for (std::size_t i = 0; i < code.size(); ++i) {
        text += fmt::format("{},{}\n", i, code.chips[i]);
    }
    return text;
}

std::string map_db_csv(const RdMap& map)
{
    const RdMap normalized = normalize_peak(map);
    const std::size_t rows = normalized.data.rows();
    const auto cols = static_cast<long>(normalized.data.cols());
    std::string text = "schema_version,range_bin,doppler_bin,amplitude_db\n";
    // Doppler axis in display order: -M/2 .. M/2-1.
    for (std::size_t r = 0; r < rows; ++r) {
        for (long v = -cols / 2; v < cols - cols / 2; ++v) {
            const auto stored = static_cast<std::size_t>((v + cols) % cols);
            text += fmt::format("{},{},{},{:.4f}\n", kCsvSchemaVersion, r, v,
                                floored_db(std::abs(normalized.data(r, stored))));
        }
    }
    return text;
}

} // namespace

Variant parse_variant(const std::string& name)
{
    if (name == "hr") {
        return Variant::Hr;
    }
    if (name == "onebit") {
        return Variant::OneBit;
    }
    throw Error(fmt::format("unknown variant '{}' (expected hr or onebit)", name));
}

std::string variant_name(Variant v)
{
    return v == Variant::Hr ? "hr" : "onebit";
}

AdcCube simulate_variant(const ScenarioConfig& cfg, Variant variant)
{
    const PnSequence code = canonical_code();
    if (variant == Variant::Hr) {
        Scene scene = cfg.scene;
        scene.snr_db = cfg.reference_snr_db;
        scene.rng_seed = dataset::reference_noise_seed(cfg.scene.rng_seed);
        return synthesize(cfg.radar, code, scene);
    }
    return one_bit(synthesize(cfg.radar, code, cfg.scene));
}

RdMap run_variant(const ScenarioConfig& cfg, Variant variant)
{
    return process(simulate_variant(cfg, variant), canonical_code(), cfg.radar);
}

MetricReport run_metrics(const ScenarioConfig& cfg, Variant variant)
{
    const RdMap reference = run_variant(cfg, Variant::Hr);
    const RdMap candidate = variant == Variant::Hr ? reference : run_variant(cfg, variant);
    return evaluate(candidate, reference, cfg.metrics);
}

SliceTable run_slice(const ScenarioConfig& cfg, const std::vector<Variant>& variants)
{
    if (cfg.scene.targets.empty()) {
        throw Error("slice needs a scene with a target");
    }
    const RdMap reference = normalize_peak(run_variant(cfg, Variant::Hr));
    SliceTable table;
    table.doppler_bin = cfg.metrics.doppler_bin.value_or(peak_doppler_bin(reference));
    if (table.doppler_bin >= reference.data.cols()) {
        throw Error("doppler bin out of range");
    }
    table.variants = variants;
    for (Variant v : variants) {
        const RdMap map = v == Variant::Hr ? reference : normalize_peak(run_variant(cfg, v));
        std::vector<double> column;
        for (const auto& q : map.data.column(table.doppler_bin)) {
            column.push_back(floored_db(std::abs(q)));
        }
        table.amplitude_db.push_back(std::move(column));
    }
    return table;
}

std::string SliceTable::to_csv() const
{
    std::string text = "schema_version,doppler_bin,range_bin";
    for (Variant v : variants) {
        text += "," + variant_name(v) + "_db";
    }
    text += "\n";
    const std::size_t rows = amplitude_db.empty() ? 0 : amplitude_db.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        text += fmt::format("{},{},{}", kCsvSchemaVersion, doppler_bin, r);
        for (const auto& column : amplitude_db) {
            text += fmt::format(",{:.4f}", column[r]);
        }
        text += "\n";
    }
    return text;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"PMCW radar simulation and one-bit range-Doppler processing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> variant_names;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> guard;
    bool export_arrays = false;

    auto common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", config_path, "scenario configuration file")->required();
        auto* o = sub->add_option("--out", out_dir, "output directory");
        if (needs_out) {
            o->required();
        }
        sub->add_option("--seed", seed, "noise seed (dataset: master seed)");
    };

    auto* simulate = app.add_subcommand("simulate", "synthesize a receive cube and export it with the code");
    common(simulate, true);
    simulate->add_option("--variant", variant_names, "hr or onebit")->expected(1);

    auto* process_cmd = app.add_subcommand("process", "run the range-Doppler pipeline");
    common(process_cmd, true);
    process_cmd->add_option("--variant", variant_names, "hr or onebit")->expected(1);

    auto* metrics = app.add_subcommand("metrics", "MSE/PSL/ISL of a variant against the hr reference");
    common(metrics, false);
    metrics->add_option("--variant", variant_names, "hr or onebit")->expected(1);
    metrics->add_option("--guard", guard, "PSL/ISL guard half-width in range bins");

    auto* dataset_cmd = app.add_subcommand("dataset", "generate a paired training corpus");
    common(dataset_cmd, true);
    dataset_cmd->add_flag("--export", export_arrays, "also write dense-array interchange files");

    auto* slice = app.add_subcommand("slice", "range cut through the target's Doppler column");
    common(slice, true);
    slice->add_option("--variant", variant_names, "hr and/or onebit (repeatable)");
    slice->add_option("--guard", guard, "unused; accepted for symmetry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        ScenarioConfig cfg = load_config(config_path);
        if (seed) {
            cfg.scene.rng_seed = *seed;
            cfg.corpus.master_seed = *seed;
        }
        if (guard) {
            cfg.metrics.guard = *guard;
        }
        std::vector<Variant> variants;
        for (const auto& name : variant_names) {
            variants.push_back(parse_variant(name));
        }
        const auto single = [&](Variant fallback) { return variants.empty() ? fallback : variants.front(); };
        const std::filesystem::path dir = out_dir;
        if (!out_dir.empty()) {
            std::filesystem::create_directories(dir);
        }

        if (simulate->parsed()) {
            const Variant v = single(Variant::OneBit);
            const AdcCube cube = simulate_variant(cfg, v);
            const auto array =
                cube.quantized ? dataset::cube_to_array(cube) : full_precision_array(cube.data);
            dataset::write_dense_array(dir / "cube.arr", array);
            write_text(dir / "code.csv", code_csv(canonical_code()));
            out << fmt::format("wrote {} cube {}x{} to {}\n", variant_name(v), cube.data.rows(),
                               cube.data.cols(), (dir / "cube.arr").string());
        } else if (process_cmd->parsed()) {
            const Variant v = single(Variant::OneBit);
            const RdMap map = run_variant(cfg, v);
            dataset::write_dense_array(dir / "rd_map.arr", dataset::map_to_array(map));
            write_text(dir / "rd_map_db.csv", map_db_csv(map));
            out << fmt::format("wrote {} map {}x{} to {}\n", variant_name(v), map.data.rows(),
                               map.data.cols(), dir.string());
        } else if (metrics->parsed()) {
            const Variant v = single(Variant::OneBit);
            const MetricReport report = run_metrics(cfg, v);
            out << "variant = " << variant_name(v) << "\n" << report.to_key_value();
            if (!out_dir.empty()) {
                write_text(dir / "metrics.txt", "variant = " + variant_name(v) + "\n" + report.to_key_value());
                write_text(dir / "metrics.csv",
                           MetricReport::csv_header() + "\n" + report.to_csv_row(variant_name(v)) + "\n");
            }
        } else if (dataset_cmd->parsed()) {
            const auto manifest = dataset::generate_corpus(cfg.radar, cfg.corpus, dir);
            out << fmt::format("wrote {} records to {}\n", manifest.record_count, dir.string());
            if (export_arrays) {
                const auto n = dataset::export_interchange(dir, dir / "arrays");
                out << fmt::format("exported {} records to {}\n", n, (dir / "arrays").string());
            }
        } else if (slice->parsed()) {
            if (variants.empty()) {
                variants = {Variant::Hr, Variant::OneBit};
            }
            const SliceTable table = run_slice(cfg, variants);
            write_text(dir / "slice.csv", table.to_csv());
            out << fmt::format("wrote slice at doppler bin {} to {}\n", table.doppler_bin,
                               (dir / "slice.csv").string());
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace pmcw::cli
