#include "wdisc/wlda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eigen_map.hpp"

namespace wdisc::wlda {

namespace {

constexpr std::size_t kChunkRows = 4096;
// R = S_w + ridge I is positive definite by construction, so its inverse
// square root must not truncate anything meaningful.
constexpr double kRidgeEigTol = 1e-15;
constexpr double kQBasisEigTol = 1e-10;

void validate_config(const WldaConfig& c, std::size_t d) {
    char buf[160];
    if (c.n_disc < 1 || c.n_disc > d) {
        std::snprintf(buf, sizeof(buf), "n_disc must be in [1, %zu], got %zu", d,
                      c.n_disc);
        throw Error(ErrorKind::BadArgument, buf);
    }
    if (!(c.alpha >= 0.0))
        throw Error(ErrorKind::BadArgument, "alpha must be >= 0");
    if (!(c.ridge_rel > 0.0))
        throw Error(ErrorKind::BadArgument, "ridge_rel must be > 0");
    if (!(c.whiten_rel_tol > 0.0 && c.whiten_rel_tol < 1.0))
        throw Error(ErrorKind::BadArgument, "whiten_rel_tol must be in (0, 1)");
}

// Out-of-place chunked X * S for symmetric S, keeping peak memory at one
// chunk when the caller streams.
Matrix apply_symmetric(const Matrix& x, const Matrix& s) {
    Matrix out(x.rows(), s.cols());
    const auto sm = detail::map(s);
    for (std::size_t start = 0; start < x.rows(); start += kChunkRows) {
        const auto rows =
            static_cast<Eigen::Index>(std::min(kChunkRows, x.rows() - start));
        detail::map(out).middleRows(static_cast<Eigen::Index>(start), rows).noalias() =
            detail::map(x).middleRows(static_cast<Eigen::Index>(start), rows) * sm;
    }
    return out;
}

}  // namespace

WldaConfig default_config(std::size_t d) {
    WldaConfig c;
    if (d >= 1024) {
        c.n_disc = 1000;
        c.alpha = 5.0;
    } else {
        c.n_disc = std::min<std::size_t>(500, d > 1 ? d - 1 : 1);
        c.alpha = 1.0;
    }
    return c;
}

WldaFitState fit_state(const stats::LabeledFeatures& data, const WldaConfig& config) {
    const std::size_t d = data.features.cols();
    validate_config(config, d);

    const std::size_t c = stats::validate_labels(data);
    const std::size_t n_target = std::max(config.n_fit, c);
    const stats::LabeledFeatures sub =
        stats::balanced_subsample(data, n_target, config.seed);

    // Whitening statistics on raw features.
    const stats::DatasetStats raw_stats = stats::fit_stats(sub);
    Matrix whitener = pinv_sqrt(raw_stats.s_w, config.whiten_rel_tol);

    // Scatter matrices are re-estimated on the whitened features; the
    // discriminant problem below lives entirely in whitened space.
    stats::LabeledFeatures whitened;
    whitened.features = apply_symmetric(sub.features, whitener);
    whitened.labels = sub.labels;
    const stats::DatasetStats wstats = stats::fit_stats(whitened);

    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += wstats.s_w(i, i);
    const double ridge = config.ridge_rel * trace / static_cast<double>(d);

    Matrix r = wstats.s_w;
    for (std::size_t i = 0; i < d; ++i) r(i, i) += ridge;
    const Matrix r_half = pinv_sqrt(r, kRidgeEigTol);
    const Matrix m = matmul(r_half, matmul(wstats.s_b, r_half));
    const SymmetricEig eig = symmetric_eig(m);

    if (eig.eigenvalues.empty() || eig.eigenvalues.front() <= 1e-12)
        throw Error(ErrorKind::DegenerateModel,
                    "no discriminative structure: all Fisher values are ~0 "
                    "(are the class means distinct?)");

    WldaFitState state;
    state.whitener = std::move(whitener);
    state.all_fisher = eig.eigenvalues;
    state.all_discriminants = matmul(r_half, eig.eigenvectors);
    for (std::size_t j = 0; j < d; ++j) {
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            norm_sq += state.all_discriminants(i, j) * state.all_discriminants(i, j);
        const double norm = std::sqrt(norm_sq);
        if (norm > 0.0)
            for (std::size_t i = 0; i < d; ++i) state.all_discriminants(i, j) /= norm;
    }
    state.whitened_class_means = wstats.class_means;
    state.whitened_global_mean = wstats.global_mean;
    state.config = config;
    return state;
}

WldaModel reslice(const WldaFitState& state, std::size_t n_disc, double alpha) {
    const std::size_t d = state.whitener.rows();
    if (n_disc < 1 || n_disc > d)
        throw Error(ErrorKind::BadArgument, "n_disc out of range for reslice");
    if (!(alpha >= 0.0)) throw Error(ErrorKind::BadArgument, "alpha must be >= 0");

    WldaModel model;
    model.whitener = state.whitener;
    model.config = state.config;
    model.config.n_disc = n_disc;
    model.config.alpha = alpha;

    model.discriminants = Matrix(d, n_disc);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n_disc; ++j)
            model.discriminants(i, j) = state.all_discriminants(i, j);
    model.fisher_values.assign(state.all_fisher.begin(),
                               state.all_fisher.begin() +
                                   static_cast<std::ptrdiff_t>(n_disc));

    // Orthonormal basis of col(W) from the eigenvectors of W W^T.
    const Matrix wwt = matmul(model.discriminants, transpose(model.discriminants));
    const SymmetricEig weig = symmetric_eig(wwt);
    const double lmax = weig.eigenvalues.empty() ? 0.0 : weig.eigenvalues.front();
    std::size_t rank = 0;
    while (rank < d && weig.eigenvalues[rank] > kQBasisEigTol * lmax) ++rank;
    model.q_basis = Matrix(d, rank);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < rank; ++j)
            model.q_basis(i, j) = weig.eigenvectors(i, j);

    // Subspace centers: per-class means of g and the global mean of h are
    // linear images of the whitened means.
    model.wd_class_centers = matmul(state.whitened_class_means, model.discriminants);
    const std::vector<double> qt_mean =
        mat_vec(transpose(model.q_basis), state.whitened_global_mean);
    const std::vector<double> qqt_mean = mat_vec(model.q_basis, qt_mean);
    model.wdr_center.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        model.wdr_center[i] = state.whitened_global_mean[i] - qqt_mean[i];
    return model;
}

WldaModel fit(const stats::LabeledFeatures& data, const WldaConfig& config) {
    return reslice(fit_state(data, config), config.n_disc, config.alpha);
}

Matrix whiten(const WldaModel& model, const Matrix& raw) {
    if (raw.cols() != model.dim()) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "feature dim %zu does not match model dim %zu", raw.cols(),
                      model.dim());
        throw Error(ErrorKind::DimMismatch, buf);
    }
    return apply_symmetric(raw, model.whitener);
}

Matrix project_wd(const WldaModel& model, const Matrix& raw) {
    return matmul(whiten(model, raw), model.discriminants);
}

Matrix project_wdr(const WldaModel& model, const Matrix& raw) {
    Matrix xw = whiten(model, raw);
    if (model.q_basis.cols() == 0) return xw;
    const Matrix coeff = matmul(xw, model.q_basis);
    const Matrix back = matmul(coeff, transpose(model.q_basis));
    for (std::size_t i = 0; i < xw.size(); ++i) xw.data()[i] -= back.data()[i];
    return xw;
}

}  // namespace wdisc::wlda
