#include <doctest.h>

#include <unistd.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "pmcw/dataset.hpp"
#include "pmcw/error.hpp"
#include "pmcw/quantize.hpp"
#include "pmcw/rng.hpp"

using namespace pmcw;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("pmcw_test_" + name + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RadarConfig desk_config()
{
    RadarConfig c;
    c.m_raw = 200;  // M = 10
    return c;
}

CorpusSpec desk_spec()
{
    CorpusSpec spec;
    spec.count_per_snr = 2;
    spec.snr_list = {10.0, 20.0};
    spec.master_seed = 77;
    spec.threads = 3;
    return spec;
}

std::vector<char> slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("sign-bit packing round-trips one-bit matrices")
{
    PortableRng rng(8);
    for (std::size_t cols : {1u, 3u, 17u}) {
        ComplexMatrix m(7, cols);
        for (auto& y : m.values()) {
            y = one_bit_value(rng.complex_gaussian(1.0));
        }
        const auto bytes = dataset::pack_sign_bits(m);
        CHECK(bytes.size() == (2 * 7 * cols + 7) / 8);
        CHECK(dataset::unpack_sign_bits(bytes, 7, cols) == m);
    }
    ComplexMatrix m(2, 2);
    m(0, 0) = {-1, 1};
    m(1, 0) = {1, -1};
    m(0, 1) = {1, 1};
    m(1, 1) = {-1, -1};
    // bits: s0 re, s1 im, s3 re+im -> 0b11001001
    CHECK(dataset::pack_sign_bits(m) == std::vector<std::uint8_t>{0xC9});
    CHECK_THROWS_AS(dataset::unpack_sign_bits(std::vector<std::uint8_t>(3), 2, 2), Error);
}

TEST_CASE("scene draw follows the documented distribution")
{
    const RadarConfig c;
    const SceneDistribution dist;
    const auto lim = unambiguous_limits(c);
    std::size_t seen_min = 99;
    std::size_t seen_max = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto targets = dataset::draw_targets(c, dist, seed);
        seen_min = std::min(seen_min, targets.size());
        seen_max = std::max(seen_max, targets.size());
        for (const auto& t : targets) {
            const std::size_t bin = range_bin(c, t.range_m);
            CHECK(bin >= 1);
            CHECK(bin <= 127);
            CHECK(t.range_m == doctest::Approx(static_cast<double>(bin) * c.range_resolution_m()));
            CHECK(std::abs(t.velocity_mps) <= 0.9 * lim.velocity_mps);
            CHECK(std::abs(t.gamma) >= 0.5);
            CHECK(std::abs(t.gamma) <= 1.0);
        }
        CHECK(targets.size() == dataset::draw_targets(c, dist, seed).size());
    }
    CHECK(seen_min == 1);
    CHECK(seen_max == 5);
}

TEST_CASE("corpus generation, reload and determinism")
{
    TempDir a("corpus_a");
    TempDir b("corpus_b");
    const auto config = desk_config();
    const auto spec = desk_spec();
    const auto manifest = dataset::generate_corpus(config, spec, a.path);
    CHECK(manifest.record_count == 4);
    CHECK(manifest.snr_split.size() == 2);

    auto serial = spec;
    serial.threads = 1;
    dataset::generate_corpus(config, serial, b.path);
    CHECK(slurp(a.path / "records.bin") == slurp(b.path / "records.bin"));
    CHECK(slurp(a.path / "manifest.txt") == slurp(b.path / "manifest.txt"));

    const auto loaded = dataset::load_manifest(a.path);
    CHECK(loaded.record_count == 4);
    CHECK(loaded.config.m_raw == 200);
    CHECK(loaded.config.snr_reference == SnrReference::RangeProfile);
    CHECK(loaded.reference_snr_db == 50.0);
    CHECK(loaded.snr_split == std::vector<std::pair<double, std::size_t>>{{10.0, 2}, {20.0, 2}});

    const auto code = canonical_code();
    const dataset::DatasetReader reader(a.path);
    REQUIRE(reader.size() == 4);
    for (std::uint32_t id = 0; id < 4; ++id) {
        const auto rec = reader.read(id);
        const double snr = id < 2 ? 10.0 : 20.0;
        const auto fresh = dataset::make_record(config, code, spec, id, snr);
        CHECK(rec.record_id == id);
        CHECK(rec.scene.snr_db == snr);
        CHECK(rec.scene.rng_seed == fresh.scene.rng_seed);
        REQUIRE(rec.scene.targets.size() == fresh.scene.targets.size());
        for (std::size_t k = 0; k < rec.scene.targets.size(); ++k) {
            CHECK(rec.scene.targets[k].range_m == fresh.scene.targets[k].range_m);
            CHECK(rec.scene.targets[k].gamma == fresh.scene.targets[k].gamma);
        }
        CHECK(rec.onebit_cube.quantized);
        CHECK(rec.onebit_cube.data == fresh.onebit_cube.data);
        for (std::size_t i = 0; i < rec.reference_map.data.size(); ++i) {
            const auto q = fresh.reference_map.data.values()[i];
            const bool stored_as_float32 =
                rec.reference_map.data.values()[i] ==
                std::complex<double>(static_cast<float>(q.real()), static_cast<float>(q.imag()));
            CHECK(stored_as_float32);
        }

        // Pairing integrity: regenerate the 50 dB cube from stored metadata.
        const auto regenerated = dataset::regenerate_reference(rec, code, 50.0);
        double peak = 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i < regenerated.data.size(); ++i) {
            peak = std::max(peak, std::abs(regenerated.data.values()[i]));
            err = std::max(err, std::abs(regenerated.data.values()[i] - rec.reference_map.data.values()[i]));
        }
        CHECK(err / peak <= 1e-6);

        // Noisy one-bit planes are not constant.
        const auto bits = dataset::pack_sign_bits(rec.onebit_cube.data);
        std::size_t ones = 0;
        for (auto byte : bits) {
            ones += static_cast<std::size_t>(std::popcount(byte));
        }
        CHECK(ones > bits.size() * 2);
        CHECK(ones < bits.size() * 6);
    }
    CHECK(dataset::load_record(a.path, 3).record_id == 3);
    CHECK_THROWS_AS(reader.read(4), Error);
}

TEST_CASE("corrupted payload is reported with the record id")
{
    TempDir dir("corrupt");
    dataset::generate_corpus(desk_config(), desk_spec(), dir.path);
    const auto reader = dataset::DatasetReader(dir.path);
    {
        std::fstream f(dir.path / "records.bin", std::ios::in | std::ios::out | std::ios::binary);
        // Inside record 2: skip the file header and two records, then into the payload.
        const auto fsize = fs::file_size(dir.path / "records.bin");
        const std::streamoff per_record = static_cast<std::streamoff>((fsize - 32) / 4);
        f.seekg(32 + 2 * per_record + per_record / 2);
        char c = 0;
        f.read(&c, 1);
        f.seekp(32 + 2 * per_record + per_record / 2);
        c = static_cast<char>(c ^ 0x10);
        f.write(&c, 1);
    }
    CHECK_NOTHROW(dataset::load_record(dir.path, 0));
    CHECK_THROWS_WITH_AS(dataset::load_record(dir.path, 2), "checksum mismatch in record 2", Error);
}

TEST_CASE("manifest version mismatch is rejected")
{
    TempDir dir("version");
    dataset::generate_corpus(desk_config(), desk_spec(), dir.path);
    const auto path = dir.path / "manifest.txt";
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto pos = text.find("version = 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "version = 2");
    std::ofstream(path) << text;
    CHECK_THROWS_AS(dataset::load_record(dir.path, 0), Error);
    try {
        dataset::load_manifest(dir.path);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("unsupported dataset version 2") != std::string::npos);
    }
}

TEST_CASE("invalid corpus spec fails before writing")
{
    TempDir dir("invalid");
    auto spec = desk_spec();
    spec.count_per_snr = 0;
    CHECK_THROWS_AS(dataset::generate_corpus(desk_config(), spec, dir.path), Error);
    CHECK_FALSE(fs::exists(dir.path));
}

TEST_CASE("paper-scale split: 1500 + 1500 inputs make 3000 pairs")
{
    TempDir dir("paper_split");
    RadarConfig tiny;
    tiny.m_raw = 20;  // one accumulated pulse keeps this fast
    CorpusSpec spec;
    spec.count_per_snr = 1500;
    spec.snr_list = {10.0, 20.0};
    const auto manifest = dataset::generate_corpus(tiny, spec, dir.path);
    CHECK(manifest.record_count == 3000);
    const auto loaded = dataset::load_manifest(dir.path);
    CHECK(loaded.record_count == 3000);
    std::ifstream in(dir.path / "manifest.txt");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("stored_matrices = 6000") != std::string::npos);
    CHECK(text.find("snr_split = 10:1500, 20:1500") != std::string::npos);
    CHECK(dataset::DatasetReader(dir.path).size() == 3000);
}

TEST_CASE("dense array interchange export")
{
    TempDir dir("export");
    dataset::generate_corpus(desk_config(), desk_spec(), dir.path);
    CHECK(dataset::export_interchange(dir.path, dir.path / "arrays") == 4);

    const auto rec = dataset::load_record(dir.path, 1);
    const auto cube = dataset::read_dense_array(dir.path / "arrays" / "record_00001_onebit.arr");
    CHECK(cube.dtype == dataset::DType::Int8);
    CHECK(cube.dims == std::vector<std::uint64_t>{2, 128, 200});
    // element [c][n][m] at (c*128 + n)*200 + m
    for (std::size_t n : {0u, 5u, 127u}) {
        for (std::size_t m : {0u, 99u, 199u}) {
            CHECK(static_cast<std::int8_t>(cube.payload[n * 200 + m]) == rec.onebit_cube.data(n, m).real());
            CHECK(static_cast<std::int8_t>(cube.payload[(128 + n) * 200 + m]) ==
                  rec.onebit_cube.data(n, m).imag());
        }
    }
    const auto map = dataset::read_dense_array(dir.path / "arrays" / "record_00001_reference.arr");
    CHECK(map.dtype == dataset::DType::Float32);
    CHECK(map.dims == std::vector<std::uint64_t>{2, 128, 10});
    CHECK(map.payload.size() == 2 * 128 * 10 * 4);
    float im = 0;
    const std::size_t idx = (128 + 7) * 10 + 3;
    std::memcpy(&im, map.payload.data() + 4 * idx, 4);
    CHECK(im == static_cast<float>(rec.reference_map.data(7, 3).imag()));

    CHECK_THROWS_AS(dataset::read_dense_array(dir.path / "manifest.txt"), Error);
}
