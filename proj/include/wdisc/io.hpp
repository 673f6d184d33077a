#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdisc/linalg.hpp"
#include "wdisc/scoring.hpp"
#include "wdisc/stats.hpp"
#include "wdisc/wlda.hpp"

namespace wdisc::io {

/// On-disk element type of a feature file. Values are widened to f64 in
/// memory regardless.
enum class Dtype : std::uint32_t { F32 = 0, F64 = 1 };

/// FMAT: magic "FMAT", version u32, rows u64, cols u64, dtype u32, then the
/// row-major little-endian payload. Loads reject NaN/Inf.
Matrix read_features(const std::string& path);
void write_features(const std::string& path, const Matrix& m, Dtype dtype = Dtype::F64);

/// LVEC: magic "LVEC", version u32, count u64, then little-endian i32
/// labels, all >= 0.
std::vector<std::int32_t> read_labels(const std::string& path);
void write_labels(const std::string& path, std::span<const std::int32_t> labels);

/// CSV convenience import: one sample per row, f64 fields, optionally an
/// integer label in the final column.
stats::LabeledFeatures read_csv(const std::string& path, bool last_column_is_label);

/// Model files. Round-trips are bit-exact.
void write_wlda_model(const std::string& path, const wlda::WldaModel& model);
wlda::WldaModel read_wlda_model(const std::string& path);
void write_maha_model(const std::string& path, const scoring::MahaModel& model);
scoring::MahaModel read_maha_model(const std::string& path);
void write_knn_index(const std::string& path, const scoring::KnnIndex& index);
scoring::KnnIndex read_knn_index(const std::string& path);
void write_pca_model(const std::string& path, const scoring::PcaModel& model);
scoring::PcaModel read_pca_model(const std::string& path);

/// Score files are 1-column f64 FMAT matrices; the CSV flavor is
/// `sample_index,scorer,score`.
std::vector<double> read_scores(const std::string& path);
void write_scores(const std::string& path, std::span<const double> scores);
void write_scores_csv(const std::string& path, std::string_view scorer,
                      std::span<const double> scores);

/// Experiment manifest (JSON). Paths are stored resolved against the
/// manifest's own directory; every referenced input must exist at load
/// time. Zero values for n_disc / pca_n_pc and negative alpha mean
/// "derive from the feature dimension".
struct OodSetRef {
    std::string name;
    std::string features;
    std::string logits;  // empty when absent
};

struct Manifest {
    std::string path;
    std::string id_train_features;
    std::string id_train_labels;
    std::string id_test_features;
    std::string id_test_logits;  // empty when absent
    std::vector<OodSetRef> ood_sets;
    std::vector<scoring::ScorerId> scorers;
    std::size_t wlda_n_disc = 0;
    double wlda_alpha = -1.0;
    double ridge_rel = 1e-3;
    double whiten_rel_tol = 1e-10;
    std::size_t n_fit = 200000;
    std::size_t knn_k = 10;
    std::size_t pca_n_pc = 0;
    double energy_temperature = 1.0;
    std::uint64_t seed = 0;
    std::string output_dir;
};

Manifest read_manifest(const std::string& path);

/// Writes via a temp file in the same directory plus an atomic rename, so a
/// crash never leaves a half-written artifact at the target path.
void write_text_atomic(const std::string& path, std::string_view content);

}  // namespace wdisc::io
