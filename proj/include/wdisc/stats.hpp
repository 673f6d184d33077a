#pragma once

#include <cstdint>
#include <vector>

#include "wdisc/linalg.hpp"

namespace wdisc::stats {

/// N feature rows with one class label per row. Labels are dense in [0, C):
/// fitting requires every class to appear at least once.
struct LabeledFeatures {
    Matrix features;
    std::vector<std::int32_t> labels;
};

/// Class-conditional statistics of a labeled dataset. The scatter matrices
/// are the unnormalized sums
///   s_w = sum_i (x_i - mu_{y_i})(x_i - mu_{y_i})^T
///   s_b = sum_c N_c (mu_c - mu)(mu_c - mu)^T
/// not covariances; downstream regularization is defined relative to the
/// eigenvalue scale of s_w, so the raw-sum convention is self-consistent.
struct DatasetStats {
    Matrix class_means;                     // C x D
    std::vector<double> global_mean;        // D
    Matrix s_w;                             // D x D
    Matrix s_b;                             // D x D
    std::vector<std::size_t> class_counts;  // C
    std::size_t total = 0;

    std::size_t n_classes() const noexcept { return class_counts.size(); }
    std::size_t dim() const noexcept { return class_means.cols(); }
};

/// Validates labels against the feature matrix and returns the class count
/// (max label + 1). Throws DimMismatch / EmptyClass / EmptyInput.
std::size_t validate_labels(const LabeledFeatures& data);

/// Draws an (approximately) class-balanced subset: each class contributes
/// min(its count, its share of n_target), where shares differ by at most one
/// sample. Classes short of their share contribute everything they have; the
/// shortfall is not redistributed. Selection within a class is a seeded
/// shuffle; surviving rows keep their original order. n_target >= N returns
/// the data unchanged.
LabeledFeatures balanced_subsample(const LabeledFeatures& data, std::size_t n_target,
                                   std::uint64_t seed);

/// Two-pass estimation of DatasetStats (means first, then scatter sums,
/// streaming over row chunks).
DatasetStats fit_stats(const LabeledFeatures& data);

}  // namespace wdisc::stats
