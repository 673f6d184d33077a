#pragma once

#include <cstdint>
#include <vector>

#include "wdisc/linalg.hpp"
#include "wdisc/stats.hpp"

namespace wdisc::wlda {

/// Hyperparameters for fitting. ridge_rel is the ridge strength as a
/// fraction of the mean eigenvalue of the (whitened) within-class scatter,
/// so it is invariant to feature scaling; whiten_rel_tol is the relative
/// rank cutoff of the whitening pseudo-inverse square root.
struct WldaConfig {
    std::size_t n_disc = 0;
    double alpha = 1.0;
    double ridge_rel = 1e-3;
    double whiten_rel_tol = 1e-10;
    std::size_t n_fit = 200000;
    std::uint64_t seed = 0;
};

/// Dimension-based defaults: wide features (D >= 1024) use n_disc=1000,
/// alpha=5; narrower ones n_disc=min(500, D-1), alpha=1.
WldaConfig default_config(std::size_t d);

/// Fitted whitened-LDA model. `whitener` maps raw features into whitened
/// space; `discriminants` (columns, unit norm, Fisher-descending) span the
/// discriminative subspace there; `q_basis` is an orthonormal basis of that
/// span, so I - QQ^T projects onto the residual subspace.
struct WldaModel {
    Matrix whitener;                    // D x D
    Matrix discriminants;               // D x n_disc
    std::vector<double> fisher_values;  // n_disc, descending
    Matrix q_basis;                     // D x r_W
    Matrix wd_class_centers;            // C x n_disc
    std::vector<double> wdr_center;     // D
    WldaConfig config;

    std::size_t dim() const noexcept { return whitener.rows(); }
    std::size_t n_classes() const noexcept { return wd_class_centers.rows(); }
};

/// Everything n_disc/alpha-independent about a fit: the whitener and the
/// full set of D candidate discriminants with their Fisher values, plus the
/// whitened class/global means the subspace centers derive from. Lets
/// ablation sweeps over n_disc or alpha reuse one eigendecomposition.
struct WldaFitState {
    Matrix whitener;                 // D x D
    Matrix all_discriminants;        // D x D
    std::vector<double> all_fisher;  // D, descending
    Matrix whitened_class_means;     // C x D
    std::vector<double> whitened_global_mean;  // D
    WldaConfig config;
};

/// Runs subsampling, whitening, and the regularized discriminant
/// eigenproblem. The non-symmetric problem (S_w + ridge I)^{-1} S_b w = f w
/// is solved through its congruent symmetric form
/// R^{-1/2} S_b R^{-1/2} u = f u with w = R^{-1/2} u, which has the same
/// eigenvalues and better conditioning.
WldaFitState fit_state(const stats::LabeledFeatures& data, const WldaConfig& config);

/// Cuts a model at n_disc discriminants from a fitted state: slices W,
/// rebuilds the orthonormal basis of col(W), and recomputes the subspace
/// centers (linear images of the stored whitened means).
WldaModel reslice(const WldaFitState& state, std::size_t n_disc, double alpha);

WldaModel fit(const stats::LabeledFeatures& data, const WldaConfig& config);

/// Whitens raw rows and projects onto the discriminants: rows of
/// W^T (whitener z).
Matrix project_wd(const WldaModel& model, const Matrix& raw);

/// Whitens raw rows and projects onto the residual subspace: rows of
/// (I - QQ^T)(whitener z).
Matrix project_wdr(const WldaModel& model, const Matrix& raw);

/// Whitened features, exposed for reuse by the projections and tests.
Matrix whiten(const WldaModel& model, const Matrix& raw);

}  // namespace wdisc::wlda
