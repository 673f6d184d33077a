#include "wdisc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "binio.hpp"

namespace fs = std::filesystem;

namespace wdisc::io {

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kIoChunkBytes = 1 << 20;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for reading");
    return in;
}

/// Writes bytes to `<path>.tmp` and renames over the target.
class AtomicFile {
public:
    explicit AtomicFile(std::string path)
        : path_(std::move(path)), tmp_(path_ + ".tmp"), out_(tmp_, std::ios::binary) {
        if (!out_)
            throw Error(ErrorKind::IoFailure, "cannot open '" + tmp_ + "' for writing");
    }
    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }
    void write(const unsigned char* data, std::size_t n) {
        out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
    }
    void commit() {
        out_.flush();
        if (!out_) throw Error(ErrorKind::IoFailure, "write to '" + tmp_ + "' failed");
        out_.close();
        std::error_code ec;
        fs::rename(tmp_, path_, ec);
        if (ec)
            throw Error(ErrorKind::IoFailure,
                        "cannot move '" + tmp_ + "' to '" + path_ + "': " + ec.message());
        committed_ = true;
    }

private:
    std::string path_;
    std::string tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

std::vector<unsigned char> slurp(const std::string& path) {
    std::ifstream in = open_input(path);
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<unsigned char> buf(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(buf.data()), size);
    if (!in) throw Error(ErrorKind::IoFailure, "read of '" + path + "' failed");
    return buf;
}

void check_version(std::uint32_t version, const std::string& path) {
    if (version != kFormatVersion) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "version %u (supported: %u)", version,
                      kFormatVersion);
        throw Error(ErrorKind::VersionUnsupported, path + ": " + buf);
    }
}

void write_matrix_block(detail::ByteWriter& w, const Matrix& m) {
    w.u64(m.rows());
    w.u64(m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) w.f64(m.data()[i]);
}

Matrix read_matrix_block(detail::ByteReader& r, std::size_t rows, std::size_t cols) {
    const std::uint64_t file_rows = r.u64();
    const std::uint64_t file_cols = r.u64();
    if (file_rows != rows || file_cols != cols) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "matrix block is %llu x %llu where %zu x %zu was expected",
                      static_cast<unsigned long long>(file_rows),
                      static_cast<unsigned long long>(file_cols), rows, cols);
        throw Error(ErrorKind::BadValue, r.source() + ": " + buf);
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = r.f64();
    return m;
}

void write_vector_block(detail::ByteWriter& w, std::span<const double> v) {
    w.u64(1);
    w.u64(v.size());
    for (double x : v) w.f64(x);
}

std::vector<double> read_vector_block(detail::ByteReader& r, std::size_t len) {
    const Matrix m = read_matrix_block(r, 1, len);
    return m.values();
}

void write_small_file(const std::string& path, const detail::ByteWriter& w) {
    AtomicFile out(path);
    out.write(w.bytes().data(), w.bytes().size());
    out.commit();
}

}  // namespace

Matrix read_features(const std::string& path) {
    std::ifstream in = open_input(path);
    unsigned char header[28];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw Error(ErrorKind::TruncatedPayload, path + ": file ends mid-header");
    if (std::memcmp(header, "FMAT", 4) != 0)
        throw Error(ErrorKind::BadMagic,
                    path + ": expected magic 'FMAT', found '" +
                        std::string(reinterpret_cast<char*>(header), 4) + "'");
    check_version(detail::decode_u32(header + 4), path);
    const std::uint64_t rows = detail::decode_u64(header + 8);
    const std::uint64_t cols = detail::decode_u64(header + 16);
    const std::uint32_t dtype = detail::decode_u32(header + 24);
    if (dtype != static_cast<std::uint32_t>(Dtype::F32) &&
        dtype != static_cast<std::uint32_t>(Dtype::F64))
        throw Error(ErrorKind::BadValue,
                    path + ": unknown dtype code " + std::to_string(dtype));
    const std::size_t elem = dtype == static_cast<std::uint32_t>(Dtype::F32) ? 4 : 8;
    if (cols != 0 && rows > std::numeric_limits<std::size_t>::max() / cols / 8)
        throw Error(ErrorKind::BadValue, path + ": dimensions overflow");

    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    const std::size_t total = m.size();
    std::vector<unsigned char> buf(std::min(kIoChunkBytes, std::max<std::size_t>(total * elem, 1)));
    std::size_t decoded = 0;
    bool finite = true;
    while (decoded < total) {
        const std::size_t want = std::min((total - decoded) * elem, buf.size());
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(want));
        if (static_cast<std::size_t>(in.gcount()) != want)
            throw Error(ErrorKind::TruncatedPayload,
                        path + ": payload shorter than rows*cols header claims");
        const std::size_t count = want / elem;
        if (elem == 4) {
            for (std::size_t i = 0; i < count; ++i) {
                const double v =
                    static_cast<double>(detail::decode_f32(buf.data() + 4 * i));
                finite = finite && std::isfinite(v);
                m.data()[decoded + i] = v;
            }
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                const double v = detail::decode_f64(buf.data() + 8 * i);
                finite = finite && std::isfinite(v);
                m.data()[decoded + i] = v;
            }
        }
        decoded += count;
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw Error(ErrorKind::BadValue, path + ": trailing bytes after payload");
    if (!finite) throw Error(ErrorKind::NonFinite, path + ": payload contains NaN or Inf");
    return m;
}

void write_features(const std::string& path, const Matrix& m, Dtype dtype) {
    const std::size_t elem = dtype == Dtype::F32 ? 4 : 8;
    AtomicFile out(path);
    unsigned char header[28];
    std::memcpy(header, "FMAT", 4);
    detail::encode_u32(kFormatVersion, header + 4);
    detail::encode_u64(m.rows(), header + 8);
    detail::encode_u64(m.cols(), header + 16);
    detail::encode_u32(static_cast<std::uint32_t>(dtype), header + 24);
    out.write(header, sizeof(header));

    const std::size_t total = m.size();
    std::vector<unsigned char> buf(std::min(kIoChunkBytes, std::max<std::size_t>(total * elem, 1)));
    std::size_t written = 0;
    while (written < total) {
        const std::size_t count = std::min(buf.size() / elem, total - written);
        if (dtype == Dtype::F32) {
            for (std::size_t i = 0; i < count; ++i)
                detail::encode_u32(
                    std::bit_cast<std::uint32_t>(
                        static_cast<float>(m.data()[written + i])),
                    buf.data() + 4 * i);
        } else {
            for (std::size_t i = 0; i < count; ++i)
                detail::encode_u64(std::bit_cast<std::uint64_t>(m.data()[written + i]),
                                   buf.data() + 8 * i);
        }
        out.write(buf.data(), count * elem);
        written += count;
    }
    out.commit();
}

std::vector<std::int32_t> read_labels(const std::string& path) {
    const std::vector<unsigned char> bytes = slurp(path);
    detail::ByteReader r(bytes, path);
    r.expect_magic("LVEC");
    check_version(r.u32(), path);
    const std::uint64_t count = r.u64();
    std::vector<std::int32_t> labels(static_cast<std::size_t>(count));
    for (auto& v : labels) {
        v = r.i32();
        if (v < 0)
            throw Error(ErrorKind::BadValue, path + ": negative label " + std::to_string(v));
    }
    if (!r.exhausted())
        throw Error(ErrorKind::BadValue, path + ": trailing bytes after payload");
    return labels;
}

void write_labels(const std::string& path, std::span<const std::int32_t> labels) {
    detail::ByteWriter w;
    w.magic("LVEC");
    w.u32(kFormatVersion);
    w.u64(labels.size());
    for (std::int32_t v : labels) w.i32(v);
    write_small_file(path, w);
}

stats::LabeledFeatures read_csv(const std::string& path, bool last_column_is_label) {
    std::ifstream in = open_input(path);
    std::vector<double> values;
    std::vector<std::int32_t> labels;
    std::size_t cols = 0;
    std::size_t row = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::vector<double> fields;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            std::size_t a = start;
            std::size_t b = end;
            while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
            while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t')) --b;
            double v = 0.0;
            const auto res = std::from_chars(line.data() + a, line.data() + b, v);
            if (res.ec != std::errc() || res.ptr != line.data() + b)
                throw Error(ErrorKind::BadValue,
                            path + ": line " + std::to_string(row) + ": cannot parse '" +
                                line.substr(a, b - a) + "' as a number");
            fields.push_back(v);
            start = end + 1;
        }
        const std::size_t feature_cols = fields.size() - (last_column_is_label ? 1 : 0);
        if (feature_cols == 0)
            throw Error(ErrorKind::BadValue,
                        path + ": line " + std::to_string(row) + ": no feature columns");
        if (cols == 0) cols = feature_cols;
        if (feature_cols != cols)
            throw Error(ErrorKind::DimMismatch,
                        path + ": line " + std::to_string(row) + " has " +
                            std::to_string(feature_cols) + " feature columns, expected " +
                            std::to_string(cols));
        values.insert(values.end(), fields.begin(),
                      fields.begin() + static_cast<std::ptrdiff_t>(cols));
        if (last_column_is_label) {
            const double y = fields.back();
            if (!(y >= 0) || y != std::floor(y) || y > 2147483647.0)
                throw Error(ErrorKind::BadValue,
                            path + ": line " + std::to_string(row) +
                                ": label must be a non-negative integer");
            labels.push_back(static_cast<std::int32_t>(y));
        }
    }
    if (values.empty()) throw Error(ErrorKind::EmptyInput, path + ": no data rows");

    stats::LabeledFeatures out;
    const std::size_t n_rows = values.size() / cols;  // before the move below
    out.features = Matrix(n_rows, cols, std::move(values));
    out.labels = std::move(labels);
    if (!out.features.all_finite())
        throw Error(ErrorKind::NonFinite, path + ": payload contains NaN or Inf");
    return out;
}

void write_wlda_model(const std::string& path, const wlda::WldaModel& model) {
    detail::ByteWriter w;
    w.magic("WLDA");
    w.u32(kFormatVersion);
    w.u64(model.dim());
    w.u64(model.n_classes());
    w.u64(model.config.n_disc);
    w.u64(model.q_basis.cols());
    w.f64(model.config.alpha);
    w.f64(model.config.ridge_rel);
    w.f64(model.config.whiten_rel_tol);
    w.u64(model.config.n_fit);
    w.u64(model.config.seed);
    write_matrix_block(w, model.whitener);
    write_matrix_block(w, model.discriminants);
    write_vector_block(w, model.fisher_values);
    write_matrix_block(w, model.q_basis);
    write_matrix_block(w, model.wd_class_centers);
    write_vector_block(w, model.wdr_center);
    write_small_file(path, w);
}

wlda::WldaModel read_wlda_model(const std::string& path) {
    const std::vector<unsigned char> bytes = slurp(path);
    detail::ByteReader r(bytes, path);
    r.expect_magic("WLDA");
    check_version(r.u32(), path);
    const std::size_t d = static_cast<std::size_t>(r.u64());
    const std::size_t c = static_cast<std::size_t>(r.u64());
    const std::size_t n_disc = static_cast<std::size_t>(r.u64());
    const std::size_t r_w = static_cast<std::size_t>(r.u64());

    wlda::WldaModel m;
    m.config.n_disc = n_disc;
    m.config.alpha = r.f64();
    m.config.ridge_rel = r.f64();
    m.config.whiten_rel_tol = r.f64();
    m.config.n_fit = static_cast<std::size_t>(r.u64());
    m.config.seed = r.u64();
    m.whitener = read_matrix_block(r, d, d);
    m.discriminants = read_matrix_block(r, d, n_disc);
    m.fisher_values = read_vector_block(r, n_disc);
    m.q_basis = read_matrix_block(r, d, r_w);
    m.wd_class_centers = read_matrix_block(r, c, n_disc);
    m.wdr_center = read_vector_block(r, d);
    if (!r.exhausted())
        throw Error(ErrorKind::BadValue, path + ": trailing bytes after payload");
    return m;
}

void write_maha_model(const std::string& path, const scoring::MahaModel& model) {
    detail::ByteWriter w;
    w.magic("MAHA");
    w.u32(kFormatVersion);
    w.u64(model.class_means.rows());
    w.u64(model.class_means.cols());
    write_matrix_block(w, model.class_means);
    write_matrix_block(w, model.shared_precision);
    write_small_file(path, w);
}

scoring::MahaModel read_maha_model(const std::string& path) {
    const std::vector<unsigned char> bytes = slurp(path);
    detail::ByteReader r(bytes, path);
    r.expect_magic("MAHA");
    check_version(r.u32(), path);
    const std::size_t c = static_cast<std::size_t>(r.u64());
    const std::size_t d = static_cast<std::size_t>(r.u64());
    scoring::MahaModel m;
    m.class_means = read_matrix_block(r, c, d);
    m.shared_precision = read_matrix_block(r, d, d);
    if (!r.exhausted())
        throw Error(ErrorKind::BadValue, path + ": trailing bytes after payload");
    return m;
}

void write_knn_index(const std::string& path, const scoring::KnnIndex& index) {
    detail::ByteWriter w;
    w.magic("KNNI");
    w.u32(kFormatVersion);
    w.u64(index.bank.rows());
    w.u64(index.bank.cols());
    w.u64(index.k);
    write_matrix_block(w, index.bank);
    write_small_file(path, w);
}

scoring::KnnIndex read_knn_index(const std::string& path) {
    const std::vector<unsigned char> bytes = slurp(path);
    detail::ByteReader r(bytes, path);
    r.expect_magic("KNNI");
    check_version(r.u32(), path);
    const std::size_t m_rows = static_cast<std::size_t>(r.u64());
    const std::size_t d = static_cast<std::size_t>(r.u64());
    scoring::KnnIndex idx;
    idx.k = static_cast<std::size_t>(r.u64());
    idx.bank = read_matrix_block(r, m_rows, d);
    if (!r.exhausted())
        throw Error(ErrorKind::BadValue, path + ": trailing bytes after payload");
    if (idx.k < 1 || idx.k > idx.bank.rows())
        throw Error(ErrorKind::KTooLarge,
                    path + ": stored k exceeds the stored bank size");
    return idx;
}

void write_pca_model(const std::string& path, const scoring::PcaModel& model) {
    detail::ByteWriter w;
    w.magic("PCAM");
    w.u32(kFormatVersion);
    w.u64(model.mean.size());
    w.u64(model.principal_basis.cols());
    write_vector_block(w, model.mean);
    write_matrix_block(w, model.principal_basis);
    write_small_file(path, w);
}

scoring::PcaModel read_pca_model(const std::string& path) {
    const std::vector<unsigned char> bytes = slurp(path);
    detail::ByteReader r(bytes, path);
    r.expect_magic("PCAM");
    check_version(r.u32(), path);
    const std::size_t d = static_cast<std::size_t>(r.u64());
    const std::size_t n_pc = static_cast<std::size_t>(r.u64());
    scoring::PcaModel m;
    m.mean = read_vector_block(r, d);
    m.principal_basis = read_matrix_block(r, d, n_pc);
    if (!r.exhausted())
        throw Error(ErrorKind::BadValue, path + ": trailing bytes after payload");
    return m;
}

std::vector<double> read_scores(const std::string& path) {
    const Matrix m = read_features(path);
    if (m.cols() != 1)
        throw Error(ErrorKind::DimMismatch,
                    path + ": score file must have exactly one column, has " +
                        std::to_string(m.cols()));
    return m.values();
}

void write_scores(const std::string& path, std::span<const double> scores) {
    Matrix m(scores.size(), 1, std::vector<double>(scores.begin(), scores.end()));
    write_features(path, m, Dtype::F64);
}

void write_scores_csv(const std::string& path, std::string_view scorer,
                      std::span<const double> scores) {
    std::ostringstream csv;
    csv << "sample_index,scorer,score\n";
    char buf[64];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.*s,%.17g\n", i,
                      static_cast<int>(scorer.size()), scorer.data(), scores[i]);
        csv << buf;
    }
    write_text_atomic(path, csv.str());
}

namespace {

using nlohmann::json;

[[noreturn]] void manifest_fail(const std::string& path, const std::string& entry,
                                const std::string& what) {
    throw Error(ErrorKind::BadManifest, path + ": entry '" + entry + "': " + what);
}

std::string resolve(const fs::path& base, const std::string& rel) {
    fs::path p(rel);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (base / p).lexically_normal().string();
}

std::string require_file(const std::string& manifest_path, const fs::path& base,
                         const json& j, const std::string& entry) {
    if (!j.is_string()) manifest_fail(manifest_path, entry, "expected a path string");
    const std::string resolved = resolve(base, j.get<std::string>());
    if (!fs::exists(resolved))
        manifest_fail(manifest_path, entry, "file does not exist: " + resolved);
    return resolved;
}

}  // namespace

Manifest read_manifest(const std::string& path) {
    std::ifstream in = open_input(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::BadManifest, path + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::BadManifest, path + ": not a JSON object");
    const fs::path base = fs::path(path).parent_path();

    Manifest m;
    m.path = path;
    if (j.contains("schema") && j["schema"] != 1)
        throw Error(ErrorKind::VersionUnsupported,
                    path + ": manifest schema " + j["schema"].dump() + " (supported: 1)");

    if (!j.contains("id_train") || !j["id_train"].is_object())
        manifest_fail(path, "id_train", "required object is missing");
    if (!j["id_train"].contains("features"))
        manifest_fail(path, "id_train.features", "required path is missing");
    if (!j["id_train"].contains("labels"))
        manifest_fail(path, "id_train.labels", "required path is missing");
    m.id_train_features =
        require_file(path, base, j["id_train"]["features"], "id_train.features");
    m.id_train_labels =
        require_file(path, base, j["id_train"]["labels"], "id_train.labels");

    if (!j.contains("id_test") || !j["id_test"].is_object())
        manifest_fail(path, "id_test", "required object is missing");
    if (!j["id_test"].contains("features"))
        manifest_fail(path, "id_test.features", "required path is missing");
    m.id_test_features =
        require_file(path, base, j["id_test"]["features"], "id_test.features");
    if (j["id_test"].contains("logits"))
        m.id_test_logits =
            require_file(path, base, j["id_test"]["logits"], "id_test.logits");

    if (!j.contains("ood_sets") || !j["ood_sets"].is_array() || j["ood_sets"].empty())
        manifest_fail(path, "ood_sets", "required non-empty array is missing");
    for (std::size_t i = 0; i < j["ood_sets"].size(); ++i) {
        const json& s = j["ood_sets"][i];
        const std::string entry = "ood_sets[" + std::to_string(i) + "]";
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string())
            manifest_fail(path, entry, "each OOD set needs a string 'name'");
        OodSetRef ref;
        ref.name = s["name"].get<std::string>();
        if (ref.name.empty() ||
            ref.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                       "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
                std::string::npos)
            manifest_fail(path, entry + ".name",
                          "names are limited to [A-Za-z0-9_-] (used in file names)");
        for (const auto& other : m.ood_sets)
            if (other.name == ref.name)
                manifest_fail(path, entry + ".name", "duplicate name '" + ref.name + "'");
        if (!s.contains("features"))
            manifest_fail(path, entry + ".features", "required path is missing");
        ref.features = require_file(path, base, s["features"], entry + ".features");
        if (s.contains("logits"))
            ref.logits = require_file(path, base, s["logits"], entry + ".logits");
        m.ood_sets.push_back(std::move(ref));
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            manifest_fail(path, "seed", "expected a non-negative integer");
        m.seed = j["seed"].get<std::uint64_t>();
    }

    if (j.contains("wlda")) {
        const json& w = j["wlda"];
        if (!w.is_object()) manifest_fail(path, "wlda", "expected an object");
        if (w.contains("n_disc")) {
            if (!w["n_disc"].is_number_unsigned() || w["n_disc"].get<std::uint64_t>() < 1)
                manifest_fail(path, "wlda.n_disc", "expected a positive integer");
            m.wlda_n_disc = w["n_disc"].get<std::size_t>();
        }
        if (w.contains("alpha")) {
            if (!w["alpha"].is_number() || w["alpha"].get<double>() < 0.0)
                manifest_fail(path, "wlda.alpha", "expected a number >= 0");
            m.wlda_alpha = w["alpha"].get<double>();
        }
        if (w.contains("ridge_rel")) {
            if (!w["ridge_rel"].is_number() || !(w["ridge_rel"].get<double>() > 0.0))
                manifest_fail(path, "wlda.ridge_rel", "expected a number > 0");
            m.ridge_rel = w["ridge_rel"].get<double>();
        }
        if (w.contains("whiten_rel_tol")) {
            const double v = w["whiten_rel_tol"].is_number()
                                 ? w["whiten_rel_tol"].get<double>()
                                 : -1.0;
            if (!(v > 0.0 && v < 1.0))
                manifest_fail(path, "wlda.whiten_rel_tol", "expected a number in (0, 1)");
            m.whiten_rel_tol = v;
        }
        if (w.contains("n_fit")) {
            if (!w["n_fit"].is_number_unsigned() || w["n_fit"].get<std::uint64_t>() < 2)
                manifest_fail(path, "wlda.n_fit", "expected an integer >= 2");
            m.n_fit = w["n_fit"].get<std::size_t>();
        }
    }

    if (j.contains("knn")) {
        const json& k = j["knn"];
        if (!k.is_object()) manifest_fail(path, "knn", "expected an object");
        if (k.contains("k")) {
            if (!k["k"].is_number_unsigned() || k["k"].get<std::uint64_t>() < 1)
                manifest_fail(path, "knn.k", "expected a positive integer");
            m.knn_k = k["k"].get<std::size_t>();
        }
    }
    if (j.contains("pca")) {
        const json& p = j["pca"];
        if (!p.is_object()) manifest_fail(path, "pca", "expected an object");
        if (p.contains("n_pc")) {
            if (!p["n_pc"].is_number_unsigned() || p["n_pc"].get<std::uint64_t>() < 1)
                manifest_fail(path, "pca.n_pc", "expected a positive integer");
            m.pca_n_pc = p["n_pc"].get<std::size_t>();
        }
    }
    if (j.contains("energy")) {
        const json& e = j["energy"];
        if (!e.is_object()) manifest_fail(path, "energy", "expected an object");
        if (e.contains("temperature")) {
            if (!e["temperature"].is_number() || !(e["temperature"].get<double>() > 0.0))
                manifest_fail(path, "energy.temperature", "expected a number > 0");
            m.energy_temperature = e["temperature"].get<double>();
        }
    }

    const bool logits_everywhere =
        !m.id_test_logits.empty() &&
        std::all_of(m.ood_sets.begin(), m.ood_sets.end(),
                    [](const OodSetRef& s) { return !s.logits.empty(); });
    if (j.contains("scorers")) {
        if (!j["scorers"].is_array() || j["scorers"].empty())
            manifest_fail(path, "scorers", "expected a non-empty array of scorer names");
        for (const auto& s : j["scorers"]) {
            if (!s.is_string()) manifest_fail(path, "scorers", "names must be strings");
            scoring::ScorerId id;
            try {
                id = scoring::parse_scorer_id(s.get<std::string>());
            } catch (const Error&) {
                manifest_fail(path, "scorers", "unknown scorer '" + s.get<std::string>() +
                                                   "'");
            }
            const bool needs_logits = id == scoring::ScorerId::Msp ||
                                      id == scoring::ScorerId::Energy ||
                                      id == scoring::ScorerId::MaxLogit;
            if (needs_logits && !logits_everywhere)
                manifest_fail(path, "scorers",
                              "scorer '" + s.get<std::string>() +
                                  "' needs logits for id_test and every OOD set");
            m.scorers.push_back(id);
        }
    } else {
        m.scorers = {scoring::ScorerId::WDiscOOD, scoring::ScorerId::Wd,
                     scoring::ScorerId::Wdr,      scoring::ScorerId::Maha,
                     scoring::ScorerId::Knn,      scoring::ScorerId::Pr};
        if (logits_everywhere) {
            m.scorers.push_back(scoring::ScorerId::Msp);
            m.scorers.push_back(scoring::ScorerId::Energy);
            m.scorers.push_back(scoring::ScorerId::MaxLogit);
        }
    }

    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            manifest_fail(path, "output_dir", "expected a path string");
        m.output_dir = resolve(base, j["output_dir"].get<std::string>());
    } else {
        m.output_dir = resolve(base, "out");
    }
    return m;
}

void write_text_atomic(const std::string& path, std::string_view content) {
    AtomicFile out(path);
    out.write(reinterpret_cast<const unsigned char*>(content.data()), content.size());
    out.commit();
}

}  // namespace wdisc::io
