#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pmcw/config.hpp"
#include "pmcw/rd.hpp"
#include "pmcw/scene.hpp"

namespace pmcw::dataset {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr const char* kManifestName = "manifest.txt";
inline constexpr const char* kRecordsName = "records.bin";

/// One training pair: the one-bit input at the record SNR and the
/// full-precision reference map of the same geometry at the reference SNR.
struct DatasetRecord {
    std::uint32_t record_id = 0;
    Scene scene;  // rng_seed seeds the one-bit input noise
    AdcCube onebit_cube;
    RdMap reference_map;
    RadarConfig config;
};

struct DatasetManifest {
    std::uint32_t version = kFormatVersion;
    std::size_t record_count = 0;
    std::vector<std::pair<double, std::size_t>> snr_split;
    double reference_snr_db = 50.0;
    RadarConfig config;
    std::uint64_t master_seed = 0;
};

/// Seed of the record's scene draw.
std::uint64_t record_seed(std::uint64_t master_seed, std::uint32_t record_id);

/// Noise seed of the reference-SNR cube for a scene whose input noise seed is
/// `input_seed`.
std::uint64_t reference_noise_seed(std::uint64_t input_seed);

/// Draws the geometry of one record (targets only; snr and seed left unset).
std::vector<Target> draw_targets(const RadarConfig& config, const SceneDistribution& dist,
                                 std::uint64_t seed);

/// Builds one record in memory.
DatasetRecord make_record(const RadarConfig& config, const PnSequence& code, const CorpusSpec& spec,
                          std::uint32_t record_id, double snr_db);

/// Full-precision map of the record's geometry at the reference SNR,
/// regenerated from stored metadata.
RdMap regenerate_reference(const DatasetRecord& record, const PnSequence& code, double reference_snr_db);

/// Writes records.bin then manifest.txt into `dir` (created if needed).
/// Records are ordered by snr_list entry, then index. Generation runs on
/// spec.threads workers; the file is written by one thread in record order.
DatasetManifest generate_corpus(const RadarConfig& config, const CorpusSpec& spec,
                                const std::filesystem::path& dir);

DatasetManifest load_manifest(const std::filesystem::path& dir);

/// Random access to a dataset directory. The constructor validates the
/// manifest and file header and indexes record offsets; read() loads one
/// record and verifies its CRC. Safe for concurrent readers.
class DatasetReader {
public:
    explicit DatasetReader(const std::filesystem::path& dir);

    const DatasetManifest& manifest() const noexcept { return manifest_; }
    std::size_t size() const noexcept { return offsets_.size(); }
    DatasetRecord read(std::uint32_t record_id) const;

private:
    struct Extent {
        std::uint64_t offset;
        std::uint64_t size;
    };
    DatasetManifest manifest_;
    std::filesystem::path path_;
    std::vector<Extent> offsets_;
};

/// Reads one record; verifies versions and the record CRC.
DatasetRecord load_record(const std::filesystem::path& dir, std::uint32_t record_id);

// Sign-bit packing: sample s (column-major) uses bit 2s for the real part and
// bit 2s+1 for the imaginary part, LSB first; a set bit means -1.
std::vector<std::uint8_t> pack_sign_bits(const ComplexMatrix& onebit);
ComplexMatrix unpack_sign_bits(std::span<const std::uint8_t> bytes, std::size_t rows, std::size_t cols);

/// Dense array file: "PMCWARR1", u32 dtype, u32 ndim, u64 dims[ndim], then a
/// little-endian row-major payload.
enum class DType : std::uint32_t { Int8 = 1, Float32 = 2 };

struct DenseArray {
    DType dtype = DType::Float32;
    std::vector<std::uint64_t> dims;
    std::vector<std::uint8_t> payload;
};

void write_dense_array(const std::filesystem::path& path, const DenseArray& array);
DenseArray read_dense_array(const std::filesystem::path& path);

/// Channel-first planes [2][rows][cols] (real, imaginary).
DenseArray cube_to_array(const AdcCube& cube);  // int8, one-bit values
DenseArray map_to_array(const RdMap& map);      // float32

/// Writes record_<id>_onebit.arr and record_<id>_reference.arr for every
/// record. Returns the number of records exported.
std::size_t export_interchange(const std::filesystem::path& dataset_dir,
                               const std::filesystem::path& out_dir);

} // namespace pmcw::dataset
