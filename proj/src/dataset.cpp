#include "pmcw/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "pmcw/error.hpp"
#include "pmcw/quantize.hpp"
#include "pmcw/rng.hpp"

namespace pmcw::dataset {
namespace {

constexpr char kFileMagic[8] = {'P', 'M', 'C', 'W', 'R', 'E', 'C', '\0'};
constexpr char kArrayMagic[8] = {'P', 'M', 'C', 'W', 'A', 'R', 'R', '1'};
constexpr std::uint32_t kRecordMagic = 0x44434552;  // "RECD"
constexpr std::size_t kFileHeaderSize = 32;
// magic, id, snr, seed, target count (the reserved word follows)
constexpr std::size_t kRecordPrefixSize = 4 + 4 + 8 + 8 + 4;

class ByteWriter {
public:
    template <typename T>
    void put(T value)
    {
        if constexpr (std::is_floating_point_v<T>) {
            using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
            put(std::bit_cast<U>(value));
        } else {
            auto u = static_cast<std::make_unsigned_t<T>>(value);
            for (std::size_t i = 0; i < sizeof(T); ++i) {
                bytes_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
            }
        }
    }
    void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
    void raw(const char* data, std::size_t n)
    {
        bytes_.insert(bytes_.end(), reinterpret_cast<const std::uint8_t*>(data),
                      reinterpret_cast<const std::uint8_t*>(data) + n);
    }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> bytes, std::string context)
        : bytes_(bytes), context_(std::move(context)) {}

    template <typename T>
    T get()
    {
        if constexpr (std::is_floating_point_v<T>) {
            using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
            return std::bit_cast<T>(get<U>());
        } else {
            need(sizeof(T));
            std::make_unsigned_t<T> u = 0;
            for (std::size_t i = 0; i < sizeof(T); ++i) {
                u |= static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8 * i);
            }
            pos_ += sizeof(T);
            return static_cast<T>(u);
        }
    }
    std::span<const std::uint8_t> take(std::size_t n)
    {
        need(n);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    std::size_t position() const noexcept { return pos_; }

private:
    void need(std::size_t n) const
    {
        if (pos_ + n > bytes_.size()) {
            throw Error(fmt::format("{}: truncated data", context_));
        }
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    std::string context_;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(std::ofstream& out, std::span<const std::uint8_t> bytes, const std::string& what)
{
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(fmt::format("write failed: {}", what));
    }
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes)
{
    return static_cast<std::uint32_t>(
        ::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::vector<std::uint8_t> encode_map(const RdMap& map)
{
    ByteWriter w;
    for (const auto& q : map.data.values()) {
        w.put(static_cast<float>(q.real()));
        w.put(static_cast<float>(q.imag()));
    }
    return std::move(w.bytes());
}

std::vector<std::uint8_t> encode_record(const DatasetRecord& record)
{
    const auto cube = pack_sign_bits(record.onebit_cube.data);
    const auto map = encode_map(record.reference_map);

    ByteWriter w;
    w.put(kRecordMagic);
    w.put(record.record_id);
    w.put(record.scene.snr_db.value_or(std::numeric_limits<double>::infinity()));
    w.put(record.scene.rng_seed);
    w.put(static_cast<std::uint32_t>(record.scene.targets.size()));
    w.put(std::uint32_t{0});
    for (const auto& t : record.scene.targets) {
        w.put(t.range_m);
        w.put(t.velocity_mps);
        w.put(t.gamma.real());
        w.put(t.gamma.imag());
    }
    w.put(static_cast<std::uint64_t>(cube.size()));
    w.put(static_cast<std::uint64_t>(map.size()));
    w.raw(cube);
    w.raw(map);
    w.put(crc32_of(w.bytes()));
    return std::move(w.bytes());
}

std::string format_real(double v)
{
    return fmt::format("{:.17g}", v);
}

std::map<std::string, std::string> parse_manifest_text(const std::string& text, const std::string& source)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            throw Error(fmt::format("{}: malformed manifest line '{}'", source, line));
        }
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

} // namespace

std::uint64_t record_seed(std::uint64_t master_seed, std::uint32_t record_id)
{
    return splitmix64(splitmix64(master_seed) + record_id);
}

std::uint64_t reference_noise_seed(std::uint64_t input_seed)
{
    return splitmix64(input_seed ^ 0x5245464552454E43ull);
}

std::vector<Target> draw_targets(const RadarConfig& config, const SceneDistribution& dist,
                                 std::uint64_t seed)
{
    PortableRng rng(seed);
    const auto limits = unambiguous_limits(config);
    const auto count = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(dist.min_targets), static_cast<std::int64_t>(dist.max_targets)));
    std::vector<Target> targets;
    targets.reserve(count);
    const double bin_width = config.range_resolution_m();
    for (std::size_t k = 0; k < count; ++k) {
        Target t;
        const auto bin = rng.uniform_int(1, static_cast<std::int64_t>(config.n_fast) - 1);
        t.range_m = static_cast<double>(bin) * bin_width;
        const double vmax = dist.velocity_fraction * limits.velocity_mps;
        t.velocity_mps = rng.uniform(-vmax, vmax);
        const double magnitude = rng.uniform(dist.gamma_min, dist.gamma_max);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        t.gamma = std::polar(magnitude, phase);
        targets.push_back(t);
    }
    return targets;
}

DatasetRecord make_record(const RadarConfig& config, const PnSequence& code, const CorpusSpec& spec,
                          std::uint32_t record_id, double snr_db)
{
    const std::uint64_t seed = record_seed(spec.master_seed, record_id);
    DatasetRecord record;
    record.record_id = record_id;
    record.config = config;
    record.scene.targets = draw_targets(config, spec.distribution, seed);
    record.scene.snr_db = snr_db;
    record.scene.rng_seed = splitmix64(seed);
    record.onebit_cube = one_bit(synthesize(config, code, record.scene));
    record.reference_map = regenerate_reference(record, code, spec.reference_snr_db);
    return record;
}

RdMap regenerate_reference(const DatasetRecord& record, const PnSequence& code, double reference_snr_db)
{
    Scene reference = record.scene;
    reference.snr_db = reference_snr_db;
    reference.rng_seed = reference_noise_seed(record.scene.rng_seed);
    return process(synthesize(record.config, code, reference), code, record.config);
}

std::vector<std::uint8_t> pack_sign_bits(const ComplexMatrix& onebit)
{
    const auto values = onebit.values();
    std::vector<std::uint8_t> bytes((2 * values.size() + 7) / 8, 0);
    for (std::size_t s = 0; s < values.size(); ++s) {
        const std::size_t re_bit = 2 * s;
        const std::size_t im_bit = re_bit + 1;
        if (values[s].real() < 0.0) {
            bytes[re_bit / 8] |= static_cast<std::uint8_t>(1u << (re_bit % 8));
        }
        if (values[s].imag() < 0.0) {
            bytes[im_bit / 8] |= static_cast<std::uint8_t>(1u << (im_bit % 8));
        }
    }
    return bytes;
}

ComplexMatrix unpack_sign_bits(std::span<const std::uint8_t> bytes, std::size_t rows, std::size_t cols)
{
    ComplexMatrix out(rows, cols);
    auto values = out.values();
    if (bytes.size() != (2 * values.size() + 7) / 8) {
        throw Error("sign-bit payload size does not match cube dimensions");
    }
    for (std::size_t s = 0; s < values.size(); ++s) {
        const std::size_t re_bit = 2 * s;
        const std::size_t im_bit = re_bit + 1;
        const bool re_neg = (bytes[re_bit / 8] >> (re_bit % 8)) & 1u;
        const bool im_neg = (bytes[im_bit / 8] >> (im_bit % 8)) & 1u;
        values[s] = {re_neg ? -1.0 : 1.0, im_neg ? -1.0 : 1.0};
    }
    return out;
}

DatasetManifest generate_corpus(const RadarConfig& config, const CorpusSpec& spec,
                                const std::filesystem::path& dir)
{
    config.validate();
    spec.validate();
    const PnSequence code = canonical_code();
    if (code.size() != config.n_fast) {
        throw Error("corpus generation uses the 128-chip code; n_fast must be 128");
    }
    const auto limits = unambiguous_limits(config);
    if (config.n_fast < 3 || limits.range_m <= 0.0) {
        throw Error("corpus spec: radar configuration too small for the scene draw");
    }

    std::filesystem::create_directories(dir);
    const auto records_path = dir / kRecordsName;
    std::ofstream out(records_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot create '{}'", records_path.string()));
    }

    const std::size_t total = spec.record_count();
    ByteWriter header;
    header.raw(kFileMagic, sizeof(kFileMagic));
    header.put(kFormatVersion);
    header.put(static_cast<std::uint32_t>(total));
    header.put(static_cast<std::uint32_t>(config.n_fast));
    header.put(static_cast<std::uint32_t>(config.m_raw));
    header.put(static_cast<std::uint32_t>(config.m_slow()));
    header.put(std::uint32_t{0});
    write_bytes(out, header.bytes(), "records header");

    std::size_t workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, total);

    // Batches of `workers` records: generated in parallel, written in order.
    std::vector<std::vector<std::uint8_t>> encoded(workers);
    std::vector<std::optional<std::string>> failures(workers);
    for (std::size_t batch = 0; batch < total; batch += workers) {
        const std::size_t n = std::min(workers, total - batch);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < n; ++w) {
                pool.emplace_back([&, w] {
                    const std::size_t id = batch + w;
                    try {
                        const double snr = spec.snr_list[id / spec.count_per_snr];
                        encoded[w] = encode_record(
                            make_record(config, code, spec, static_cast<std::uint32_t>(id), snr));
                    } catch (const std::exception& e) {
                        failures[w] = e.what();
                    }
                });
            }
        }
        for (std::size_t w = 0; w < n; ++w) {
            if (failures[w]) {
                throw Error(fmt::format("record {}: {}", batch + w, *failures[w]));
            }
            write_bytes(out, encoded[w], fmt::format("record {}", batch + w));
        }
    }
    out.close();
    if (!out) {
        throw Error(fmt::format("failed to close '{}'", records_path.string()));
    }

    DatasetManifest manifest;
    manifest.record_count = total;
    manifest.reference_snr_db = spec.reference_snr_db;
    manifest.config = config;
    manifest.master_seed = spec.master_seed;
    for (double snr : spec.snr_list) {
        manifest.snr_split.emplace_back(snr, spec.count_per_snr);
    }

    std::string split;
    for (const auto& [snr, count] : manifest.snr_split) {
        split += fmt::format("{}{}:{}", split.empty() ? "" : ", ", format_real(snr), count);
    }
    const auto& d = spec.distribution;
    std::string text;
    text += "# one-bit PMCW radar training corpus\n";
    text += fmt::format("format = pmcw-dataset\nversion = {}\n", manifest.version);
    text += fmt::format("record_count = {}\nstored_matrices = {}\n", total, 2 * total);
    text += fmt::format("snr_split = {}\n", split);
    text += fmt::format("reference_snr_db = {}\n", format_real(spec.reference_snr_db));
    text += fmt::format("snr_reference = {}\n", snr_reference_name(config.snr_reference));
    text += fmt::format("master_seed = {}\n", spec.master_seed);
    text += fmt::format("carrier_freq_hz = {}\n", format_real(config.carrier_freq_hz));
    text += fmt::format("chip_duration_s = {}\n", format_real(config.chip_duration_s));
    text += fmt::format("n_fast = {}\nm_raw = {}\naccumulation = {}\nm_slow = {}\n", config.n_fast,
                        config.m_raw, config.accumulation, config.m_slow());
    text += "code_lfsr = fibonacci\ncode_lfsr_degree = 7\ncode_lfsr_taps = 7,6\n";
    text += "code_lfsr_seed = all_ones\ncode_padding = copy_first_chip\n";
    text += fmt::format("scene_targets = uniform {}..{}\n", d.min_targets, d.max_targets);
    text += "scene_range = uniform integer bin 1..n_fast-1\n";
    text += fmt::format("scene_velocity = uniform +-{:g} of unambiguous\n", d.velocity_fraction);
    text += fmt::format("scene_gamma = magnitude uniform {}..{}, phase uniform 0..2pi\n",
                        format_real(d.gamma_min), format_real(d.gamma_max));
    text += fmt::format("records_file = {}\n", kRecordsName);
    text += "cube_encoding = sign bits, 2 per sample (re, im), column-major, lsb first, 1 = negative\n";
    text += "map_encoding = float32 interleaved re/im, column-major (doppler-bin major)\n";
    text += "checksum = crc32 per record\n";
    text += "split = none\n";

    const auto manifest_path = dir / kManifestName;
    std::ofstream mout(manifest_path, std::ios::trunc);
    mout << text;
    if (!mout) {
        throw Error(fmt::format("write failed: '{}'", manifest_path.string()));
    }
    return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& dir)
{
    const auto path = dir / kManifestName;
    const auto bytes = read_file(path);
    const auto kv = parse_manifest_text(std::string(bytes.begin(), bytes.end()), path.string());
    auto field = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw Error(fmt::format("{}: missing '{}'", path.string(), key));
        }
        return it->second;
    };

    DatasetManifest m;
    m.version = static_cast<std::uint32_t>(std::stoul(field("version")));
    if (m.version != kFormatVersion) {
        throw Error(fmt::format("{}: unsupported dataset version {} (expected {})", path.string(),
                                m.version, kFormatVersion));
    }
    m.record_count = std::stoull(field("record_count"));
    m.reference_snr_db = std::stod(field("reference_snr_db"));
    m.master_seed = std::stoull(field("master_seed"));
    m.config.carrier_freq_hz = std::stod(field("carrier_freq_hz"));
    m.config.chip_duration_s = std::stod(field("chip_duration_s"));
    m.config.n_fast = std::stoull(field("n_fast"));
    m.config.m_raw = std::stoull(field("m_raw"));
    m.config.accumulation = std::stoull(field("accumulation"));
    m.config.snr_reference = parse_snr_reference(field("snr_reference"));
    m.config.validate();

    std::istringstream split(field("snr_split"));
    std::string item;
    std::size_t sum = 0;
    while (std::getline(split, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw Error(fmt::format("{}: malformed snr_split", path.string()));
        }
        const std::size_t count = std::stoull(item.substr(colon + 1));
        m.snr_split.emplace_back(std::stod(item.substr(0, colon)), count);
        sum += count;
    }
    if (sum != m.record_count) {
        throw Error(fmt::format("{}: snr_split does not sum to record_count", path.string()));
    }
    return m;
}

DatasetReader::DatasetReader(const std::filesystem::path& dir)
    : manifest_(load_manifest(dir)), path_(dir / kRecordsName)
{
    std::ifstream in(path_, std::ios::binary);
    if (!in) {
        throw Error(fmt::format("cannot open '{}'", path_.string()));
    }
    std::vector<std::uint8_t> head(kFileHeaderSize);
    in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    if (!in) {
        throw Error(fmt::format("{}: truncated header", path_.string()));
    }
    ByteReader header(head, path_.string());
    const auto magic = header.take(sizeof(kFileMagic));
    if (!std::equal(magic.begin(), magic.end(), reinterpret_cast<const std::uint8_t*>(kFileMagic))) {
        throw Error(fmt::format("{}: bad magic", path_.string()));
    }
    const auto version = header.get<std::uint32_t>();
    if (version != kFormatVersion) {
        throw Error(fmt::format("{}: unsupported dataset version {}", path_.string(), version));
    }
    const auto count = header.get<std::uint32_t>();
    const auto n_fast = header.get<std::uint32_t>();
    const auto m_raw = header.get<std::uint32_t>();
    const auto m_slow = header.get<std::uint32_t>();
    if (count != manifest_.record_count || n_fast != manifest_.config.n_fast ||
        m_raw != manifest_.config.m_raw || m_slow != manifest_.config.m_slow()) {
        throw Error(fmt::format("{}: header disagrees with manifest", path_.string()));
    }

    // Walk the fixed-size prefix of each record and seek past its payload.
    std::uint64_t offset = kFileHeaderSize;
    for (std::uint32_t id = 0; id < count; ++id) {
        std::vector<std::uint8_t> prefix(kRecordPrefixSize);
        in.seekg(static_cast<std::streamoff>(offset));
        in.read(reinterpret_cast<char*>(prefix.data()), static_cast<std::streamsize>(prefix.size()));
        if (!in) {
            throw Error(fmt::format("{}: record {} truncated", path_.string(), id));
        }
        ByteReader r(prefix, path_.string());
        if (r.get<std::uint32_t>() != kRecordMagic) {
            throw Error(fmt::format("{}: record {} has bad magic", path_.string(), id));
        }
        r.take(4 + 8 + 8);
        const std::uint64_t k = r.get<std::uint32_t>();
        const std::uint64_t targets_end = offset + kRecordPrefixSize + 4 + 32 * k;
        std::vector<std::uint8_t> sizes(16);
        in.seekg(static_cast<std::streamoff>(targets_end));
        in.read(reinterpret_cast<char*>(sizes.data()), 16);
        if (!in) {
            throw Error(fmt::format("{}: record {} truncated", path_.string(), id));
        }
        ByteReader sr(sizes, path_.string());
        const auto cube_bytes = sr.get<std::uint64_t>();
        const auto map_bytes = sr.get<std::uint64_t>();
        const std::uint64_t size = targets_end - offset + 16 + cube_bytes + map_bytes + 4;
        offsets_.push_back({offset, size});
        offset += size;
    }
}

DatasetRecord DatasetReader::read(std::uint32_t record_id) const
{
    if (record_id >= offsets_.size()) {
        throw Error(fmt::format("record {} out of range (count {})", record_id, offsets_.size()));
    }
    const auto [offset, size] = offsets_[record_id];
    std::ifstream in(path_, std::ios::binary);
    std::vector<std::uint8_t> bytes(size);
    in.seekg(static_cast<std::streamoff>(offset));
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
    if (!in) {
        throw Error(fmt::format("{}: record {} truncated", path_.string(), record_id));
    }
    const std::string context = fmt::format("{}: record {}", path_.string(), record_id);

    const std::span<const std::uint8_t> view(bytes);
    ByteReader crc_reader(view.subspan(size - 4), context);
    if (crc32_of(view.first(size - 4)) != crc_reader.get<std::uint32_t>()) {
        throw Error(fmt::format("checksum mismatch in record {}", record_id));
    }

    const auto& config = manifest_.config;
    ByteReader r(bytes, context);
    r.get<std::uint32_t>();
    DatasetRecord record;
    record.record_id = r.get<std::uint32_t>();
    if (record.record_id != record_id) {
        throw Error(fmt::format("{}: stored id {} out of order", context, record.record_id));
    }
    record.config = config;
    const double snr = r.get<double>();
    if (std::isfinite(snr)) {
        record.scene.snr_db = snr;
    }
    record.scene.rng_seed = r.get<std::uint64_t>();
    record.scene.targets.resize(r.get<std::uint32_t>());
    r.get<std::uint32_t>();
    for (auto& t : record.scene.targets) {
        t.range_m = r.get<double>();
        t.velocity_mps = r.get<double>();
        const double re = r.get<double>();
        const double im = r.get<double>();
        t.gamma = {re, im};
    }
    const auto cube_bytes = r.get<std::uint64_t>();
    const auto map_bytes = r.get<std::uint64_t>();
    record.onebit_cube = {unpack_sign_bits(r.take(cube_bytes), config.n_fast, config.m_raw), true};
    if (map_bytes != std::uint64_t{8} * config.n_fast * config.m_slow()) {
        throw Error(fmt::format("{}: map payload size mismatch", context));
    }
    record.reference_map.data = ComplexMatrix(config.n_fast, config.m_slow());
    ByteReader mr(r.take(map_bytes), context);
    for (auto& q : record.reference_map.data.values()) {
        const float re = mr.get<float>();
        const float im = mr.get<float>();
        q = {re, im};
    }
    return record;
}

DatasetRecord load_record(const std::filesystem::path& dir, std::uint32_t record_id)
{
    return DatasetReader(dir).read(record_id);
}

void write_dense_array(const std::filesystem::path& path, const DenseArray& array)
{
    ByteWriter w;
    w.raw(kArrayMagic, sizeof(kArrayMagic));
    w.put(static_cast<std::uint32_t>(array.dtype));
    w.put(static_cast<std::uint32_t>(array.dims.size()));
    for (auto d : array.dims) {
        w.put(d);
    }
    w.raw(array.payload);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot create '{}'", path.string()));
    }
    write_bytes(out, w.bytes(), path.string());
}

DenseArray read_dense_array(const std::filesystem::path& path)
{
    const auto bytes = read_file(path);
    ByteReader r(bytes, path.string());
    const auto magic = r.take(sizeof(kArrayMagic));
    if (!std::equal(magic.begin(), magic.end(), reinterpret_cast<const std::uint8_t*>(kArrayMagic))) {
        throw Error(fmt::format("{}: not a dense array file", path.string()));
    }
    DenseArray array;
    const auto dtype = r.get<std::uint32_t>();
    if (dtype != 1 && dtype != 2) {
        throw Error(fmt::format("{}: unknown dtype {}", path.string(), dtype));
    }
    array.dtype = static_cast<DType>(dtype);
    const auto ndim = r.get<std::uint32_t>();
    std::uint64_t elements = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
        array.dims.push_back(r.get<std::uint64_t>());
        elements *= array.dims.back();
    }
    const std::size_t width = array.dtype == DType::Int8 ? 1 : 4;
    const auto payload = r.take(elements * width);
    array.payload.assign(payload.begin(), payload.end());
    return array;
}

DenseArray cube_to_array(const AdcCube& cube)
{
    if (!cube.quantized) {
        throw Error("interchange export expects a one-bit cube");
    }
    const std::size_t rows = cube.data.rows();
    const std::size_t cols = cube.data.cols();
    DenseArray array{DType::Int8, {2, rows, cols}, std::vector<std::uint8_t>(2 * rows * cols)};
    for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t m = 0; m < cols; ++m) {
            const auto y = cube.data(n, m);
            array.payload[n * cols + m] = static_cast<std::uint8_t>(static_cast<std::int8_t>(y.real()));
            array.payload[rows * cols + n * cols + m] =
                static_cast<std::uint8_t>(static_cast<std::int8_t>(y.imag()));
        }
    }
    return array;
}

DenseArray map_to_array(const RdMap& map)
{
    const std::size_t rows = map.data.rows();
    const std::size_t cols = map.data.cols();
    ByteWriter re;
    ByteWriter im;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t v = 0; v < cols; ++v) {
            re.put(static_cast<float>(map.data(r, v).real()));
            im.put(static_cast<float>(map.data(r, v).imag()));
        }
    }
    DenseArray array{DType::Float32, {2, rows, cols}, std::move(re.bytes())};
    array.payload.insert(array.payload.end(), im.bytes().begin(), im.bytes().end());
    return array;
}

std::size_t export_interchange(const std::filesystem::path& dataset_dir,
                               const std::filesystem::path& out_dir)
{
    const auto manifest = load_manifest(dataset_dir);
    std::filesystem::create_directories(out_dir);
    const DatasetReader reader(dataset_dir);
    for (std::uint32_t id = 0; id < manifest.record_count; ++id) {
        const auto record = reader.read(id);
        write_dense_array(out_dir / fmt::format("record_{:05d}_onebit.arr", id),
                          cube_to_array(record.onebit_cube));
        write_dense_array(out_dir / fmt::format("record_{:05d}_reference.arr", id),
                          map_to_array(record.reference_map));
    }
    return manifest.record_count;
}

} // namespace pmcw::dataset
