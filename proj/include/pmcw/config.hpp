#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pmcw/metrics.hpp"
#include "pmcw/scene.hpp"

namespace pmcw {

/// Random scene draw used for corpus records.
struct SceneDistribution {
    std::size_t min_targets = 1;
    std::size_t max_targets = 5;
    double velocity_fraction = 0.9;  // of the unambiguous half-width
    double gamma_min = 0.5;
    double gamma_max = 1.0;
};

struct CorpusSpec {
    std::size_t count_per_snr = 4;
    std::vector<double> snr_list{10.0, 20.0};
    std::uint64_t master_seed = 1;
    double reference_snr_db = 50.0;
    SceneDistribution distribution;
    std::size_t threads = 0;  // 0: hardware concurrency

    std::size_t record_count() const noexcept { return count_per_snr * snr_list.size(); }
    /// Throws before anything is written if counts or ranges are invalid.
    void validate() const;
};

/// Everything a run reads from a configuration file.
struct ScenarioConfig {
    RadarConfig radar;
    Scene scene;
    double reference_snr_db = 50.0;
    MetricOptions metrics;
    CorpusSpec corpus;
};

/// Parses `key = value` lines. `#` starts a comment. `target` may repeat:
///   target = <range_m> <velocity_mps> <gamma_re> <gamma_im>
/// Unknown keys are rejected. `source` names the input in error messages.
ScenarioConfig parse_config(std::string_view text, const std::string& source = "<string>");

std::string snr_reference_name(SnrReference ref);
SnrReference parse_snr_reference(std::string_view value);

/// Reads and parses a file; a missing file raises an Error naming the path.
ScenarioConfig load_config(const std::filesystem::path& path);

} // namespace pmcw
