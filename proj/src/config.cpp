#include "pmcw/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pmcw/error.hpp"

namespace pmcw {
namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class LineParser {
public:
    LineParser(const std::string& source, std::size_t line) : source_(source), line_(line) {}

    [[noreturn]] void fail(std::string_view what) const
    {
        throw Error(fmt::format("{}:{}: {}", source_, line_, what));
    }

    double real(std::string_view token) const
    {
        // std::from_chars for double is not available in every libstdc++ we target.
        const std::string text(trim(token));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(text, &used);
        } catch (const std::exception&) {
            fail(fmt::format("expected a number, got '{}'", text));
        }
        if (used != text.size() || !std::isfinite(value)) {
            fail(fmt::format("expected a finite number, got '{}'", text));
        }
        return value;
    }

    std::uint64_t integer(std::string_view token) const
    {
        token = trim(token);
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            fail(fmt::format("expected a nonnegative integer, got '{}'", token));
        }
        return value;
    }

    bool boolean(std::string_view token) const
    {
        token = trim(token);
        if (token == "true" || token == "1") {
            return true;
        }
        if (token == "false" || token == "0") {
            return false;
        }
        fail(fmt::format("expected true/false, got '{}'", token));
    }

    std::vector<double> reals(std::string_view value) const
    {
        std::vector<double> out;
        std::string text(value);
        for (auto& c : text) {
            if (c == ',') {
                c = ' ';
            }
        }
        std::istringstream in(text);
        std::string token;
        while (in >> token) {
            out.push_back(real(token));
        }
        return out;
    }

private:
    const std::string& source_;
    std::size_t line_;
};

SnrReference parse_snr_reference(std::string_view value, const LineParser& p)
{
    if (value == "range_profile") {
        return SnrReference::RangeProfile;
    }
    if (value == "sample") {
        return SnrReference::Sample;
    }
    p.fail(fmt::format("snr_reference must be range_profile or sample, got '{}'", value));
}

} // namespace

std::string snr_reference_name(SnrReference ref)
{
    return ref == SnrReference::RangeProfile ? "range_profile" : "sample";
}

SnrReference parse_snr_reference(std::string_view value)
{
    if (value == "range_profile") {
        return SnrReference::RangeProfile;
    }
    if (value == "sample") {
        return SnrReference::Sample;
    }
    throw Error(fmt::format("unknown snr_reference '{}'", value));
}

void CorpusSpec::validate() const
{
    if (count_per_snr == 0 || snr_list.empty()) {
        throw Error("corpus spec: record count must be positive");
    }
    for (double snr : snr_list) {
        if (!std::isfinite(snr)) {
            throw Error("corpus spec: snr values must be finite");
        }
    }
    if (distribution.min_targets == 0 || distribution.min_targets > distribution.max_targets) {
        throw Error("corpus spec: invalid target count range");
    }
    if (!(distribution.velocity_fraction >= 0.0 && distribution.velocity_fraction < 1.0)) {
        throw Error("corpus spec: velocity_fraction must be in [0, 1)");
    }
    if (!(distribution.gamma_min > 0.0 && distribution.gamma_min <= distribution.gamma_max)) {
        throw Error("corpus spec: invalid gamma magnitude range");
    }
}

ScenarioConfig parse_config(std::string_view text, const std::string& source)
{
    ScenarioConfig cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const LineParser p(source, line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            p.fail("expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "carrier_freq_hz") {
            cfg.radar.carrier_freq_hz = p.real(value);
        } else if (key == "chip_duration_s") {
            cfg.radar.chip_duration_s = p.real(value);
        } else if (key == "n_fast") {
            cfg.radar.n_fast = p.integer(value);
        } else if (key == "m_raw") {
            cfg.radar.m_raw = p.integer(value);
        } else if (key == "accumulation") {
            cfg.radar.accumulation = p.integer(value);
        } else if (key == "snr_reference") {
            cfg.radar.snr_reference = parse_snr_reference(value, p);
        } else if (key == "snr_db") {
            if (value == "none") {
                cfg.scene.snr_db.reset();
            } else {
                cfg.scene.snr_db = p.real(value);
            }
        } else if (key == "seed") {
            cfg.scene.rng_seed = p.integer(value);
        } else if (key == "reference_snr_db") {
            cfg.reference_snr_db = p.real(value);
            cfg.corpus.reference_snr_db = cfg.reference_snr_db;
        } else if (key == "target") {
            const auto fields = p.reals(value);
            if (fields.size() != 4) {
                p.fail("target needs: range_m velocity_mps gamma_re gamma_im");
            }
            cfg.scene.targets.push_back({fields[0], fields[1], {fields[2], fields[3]}});
        } else if (key == "guard") {
            cfg.metrics.guard = p.integer(value);
        } else if (key == "isl_power_db") {
            cfg.metrics.isl_power_db = p.boolean(value);
        } else if (key == "doppler_bin") {
            cfg.metrics.doppler_bin = p.integer(value);
        } else if (key == "count_per_snr") {
            cfg.corpus.count_per_snr = p.integer(value);
        } else if (key == "snr_list") {
            cfg.corpus.snr_list = p.reals(value);
        } else if (key == "master_seed") {
            cfg.corpus.master_seed = p.integer(value);
        } else if (key == "threads") {
            cfg.corpus.threads = p.integer(value);
        } else if (key == "min_targets") {
            cfg.corpus.distribution.min_targets = p.integer(value);
        } else if (key == "max_targets") {
            cfg.corpus.distribution.max_targets = p.integer(value);
        } else if (key == "velocity_fraction") {
            cfg.corpus.distribution.velocity_fraction = p.real(value);
        } else if (key == "gamma_min") {
            cfg.corpus.distribution.gamma_min = p.real(value);
        } else if (key == "gamma_max") {
            cfg.corpus.distribution.gamma_max = p.real(value);
        } else {
            p.fail(fmt::format("unknown key '{}'", key));
        }
    }
    try {
        cfg.radar.validate();
    } catch (const Error& e) {
        throw Error(fmt::format("{}: {}", source, e.what()));
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open config file '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

} // namespace pmcw
