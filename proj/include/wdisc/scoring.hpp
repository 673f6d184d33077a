#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wdisc/linalg.hpp"
#include "wdisc/stats.hpp"
#include "wdisc/wlda.hpp"

namespace wdisc::scoring {

enum class ScorerId {
    WDiscOOD,
    Wd,
    Wdr,
    Maha,
    Knn,
    Pr,
    Msp,
    Energy,
    MaxLogit,
};

std::string_view to_string(ScorerId id);
ScorerId parse_scorer_id(std::string_view name);

/// Per-sample OOD scores; higher means more in-distribution for every
/// scorer, so natural distances are negated.
struct ScoreVector {
    ScorerId scorer_id;
    std::vector<double> values;
};

/// Negated distance to the nearest class center in the discriminative
/// subspace: s_g(x) = -min_c ||g(x) - mu_c^WD||.
ScoreVector score_wd(const wlda::WldaModel& model, const Matrix& features);

/// Negated distance to the global training center in the residual subspace:
/// s_h(x) = -||h(x) - mu^WDR||.
ScoreVector score_wdr(const wlda::WldaModel& model, const Matrix& features);

/// Fused score s_g + alpha * s_h with alpha from the model config. At
/// alpha = 0 this is bitwise identical to score_wd.
ScoreVector score_wdiscood(const wlda::WldaModel& model, const Matrix& features);

/// Mahalanobis baseline with a class-shared covariance: S_w / (N - C),
/// inverted on its numerical support.
struct MahaModel {
    Matrix class_means;       // C x D
    Matrix shared_precision;  // D x D
};

MahaModel fit_maha(const stats::LabeledFeatures& data);

/// s(x) = -min_c (x - mu_c)^T P (x - mu_c) (squared distance).
ScoreVector score_maha(const MahaModel& model, const Matrix& features);

/// Exhaustive k-nearest-neighbor baseline over unit-normalized features.
struct KnnIndex {
    Matrix bank;  // M x D, unit rows
    std::size_t k = 10;
};

KnnIndex fit_knn(const Matrix& features, std::size_t k);

/// s(x) = -(Euclidean distance from the normalized query to its k-th
/// nearest bank row).
ScoreVector score_knn(const KnnIndex& index, const Matrix& features);

/// Principal-residual baseline: distance from the centered feature to its
/// projection onto the top principal components.
struct PcaModel {
    std::vector<double> mean;  // D
    Matrix principal_basis;    // D x n_pc, orthonormal columns
};

PcaModel fit_pca(const Matrix& features, std::size_t n_pc);

/// s(x) = -||(I - PP^T)(x - mean)||.
ScoreVector score_pr(const PcaModel& model, const Matrix& features);

/// Logit-space baselines. msp is the max softmax probability (computed with
/// max subtraction), energy is T * logsumexp(l / T), maxlogit the row max.
ScoreVector score_msp(const Matrix& logits);
ScoreVector score_energy(const Matrix& logits, double temperature = 1.0);
ScoreVector score_maxlogit(const Matrix& logits);

}  // namespace wdisc::scoring
