#include "wdisc/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "eigen_map.hpp"

namespace wdisc::scoring {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.all_finite()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s contain NaN or Inf", what);
        throw Error(ErrorKind::NonFinite, buf);
    }
}

void require_dim(const Matrix& features, std::size_t d, const char* what) {
    if (features.cols() != d) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: feature dim %zu, model dim %zu", what,
                      features.cols(), d);
        throw Error(ErrorKind::DimMismatch, buf);
    }
}

}  // namespace

std::string_view to_string(ScorerId id) {
    switch (id) {
        case ScorerId::WDiscOOD: return "wdiscood";
        case ScorerId::Wd: return "wd";
        case ScorerId::Wdr: return "wdr";
        case ScorerId::Maha: return "maha";
        case ScorerId::Knn: return "knn";
        case ScorerId::Pr: return "pr";
        case ScorerId::Msp: return "msp";
        case ScorerId::Energy: return "energy";
        case ScorerId::MaxLogit: return "maxlogit";
    }
    return "unknown";
}

ScorerId parse_scorer_id(std::string_view name) {
    for (ScorerId id :
         {ScorerId::WDiscOOD, ScorerId::Wd, ScorerId::Wdr, ScorerId::Maha,
          ScorerId::Knn, ScorerId::Pr, ScorerId::Msp, ScorerId::Energy,
          ScorerId::MaxLogit}) {
        if (to_string(id) == name) return id;
    }
    throw Error(ErrorKind::BadArgument,
                "unknown scorer '" + std::string(name) + "'");
}

ScoreVector score_wd(const wlda::WldaModel& model, const Matrix& features) {
    const Matrix g = wlda::project_wd(model, features);
    const std::size_t c = model.n_classes();
    ScoreVector out{ScorerId::Wd, std::vector<double>(features.rows())};
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < c; ++k)
            best = std::min(best, distance(g.row(i), model.wd_class_centers.row(k)));
        out.values[i] = -best;
    }
    return out;
}

ScoreVector score_wdr(const wlda::WldaModel& model, const Matrix& features) {
    const Matrix h = wlda::project_wdr(model, features);
    ScoreVector out{ScorerId::Wdr, std::vector<double>(features.rows())};
    for (std::size_t i = 0; i < h.rows(); ++i)
        out.values[i] = -distance(h.row(i), model.wdr_center);
    return out;
}

ScoreVector score_wdiscood(const wlda::WldaModel& model, const Matrix& features) {
    ScoreVector s_g = score_wd(model, features);
    const ScoreVector s_h = score_wdr(model, features);
    const double alpha = model.config.alpha;
    for (std::size_t i = 0; i < s_g.values.size(); ++i)
        s_g.values[i] += alpha * s_h.values[i];
    s_g.scorer_id = ScorerId::WDiscOOD;
    return s_g;
}

MahaModel fit_maha(const stats::LabeledFeatures& data) {
    const stats::DatasetStats st = stats::fit_stats(data);
    if (st.total <= st.n_classes())
        throw Error(ErrorKind::BadArgument,
                    "Mahalanobis needs more samples than classes");
    MahaModel model;
    model.class_means = st.class_means;
    Matrix cov = st.s_w;
    const double inv =
        1.0 / static_cast<double>(st.total - st.n_classes());
    for (std::size_t i = 0; i < cov.size(); ++i) cov.data()[i] *= inv;
    model.shared_precision = pinv_psd(cov, 1e-10);
    return model;
}

ScoreVector score_maha(const MahaModel& model, const Matrix& features) {
    const std::size_t d = model.class_means.cols();
    const std::size_t c = model.class_means.rows();
    require_dim(features, d, "score_maha");
    require_finite(features, "features");
    const std::size_t n = features.rows();

    // Pass 1: pick each sample's nearest class via the expanded quadratic
    // x^T P x - 2 x^T P mu_c + mu_c^T P mu_c, which vectorizes.
    const Matrix pm = matmul(model.class_means, model.shared_precision);  // C x D
    std::vector<double> mean_quad(c);
    for (std::size_t k = 0; k < c; ++k) {
        double dot = 0.0;
        const auto pmr = pm.row(k);
        const auto mur = model.class_means.row(k);
        for (std::size_t j = 0; j < d; ++j) dot += pmr[j] * mur[j];
        mean_quad[k] = dot;
    }
    const Matrix xp = matmul(features, model.shared_precision);  // N x D
    const Matrix cross = matmul(features, transpose(pm));         // N x C

    std::vector<std::size_t> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        double self = 0.0;
        const auto xr = features.row(i);
        const auto xpr = xp.row(i);
        for (std::size_t j = 0; j < d; ++j) self += xr[j] * xpr[j];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < c; ++k) {
            const double q = self - 2.0 * cross(i, k) + mean_quad[k];
            if (q < best) {
                best = q;
                nearest[i] = k;
            }
        }
    }

    // Pass 2: exact squared distance to the winner through a factor B with
    // B^T B = P, so the result is a true norm: nonnegative, and exactly zero
    // when the sample sits on its class mean.
    const SymmetricEig peig = symmetric_eig(model.shared_precision);
    const double lmax = peig.eigenvalues.empty() ? 0.0 : peig.eigenvalues.front();
    if (!peig.eigenvalues.empty() && peig.eigenvalues.back() < -1e-8 * std::max(lmax, 0.0))
        throw Error(ErrorKind::NotPSD, "Mahalanobis precision is not PSD");
    Matrix b(d, d);  // B = diag(sqrt(lambda^+)) V^T
    for (std::size_t i = 0; i < d; ++i) {
        const double root = peig.eigenvalues[i] > 0.0 ? std::sqrt(peig.eigenvalues[i]) : 0.0;
        for (std::size_t j = 0; j < d; ++j) b(i, j) = root * peig.eigenvectors(j, i);
    }

    ScoreVector out{ScorerId::Maha, std::vector<double>(n)};
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xr = features.row(i);
        const auto mur = model.class_means.row(nearest[i]);
        for (std::size_t j = 0; j < d; ++j) diff[j] = xr[j] - mur[j];
        const std::vector<double> bd = mat_vec(b, diff);
        double quad = 0.0;
        for (double v : bd) quad += v * v;
        out.values[i] = -quad;
    }
    return out;
}

namespace {

// Unit-normalizes rows in place; rejects rows with (numerically) zero norm.
void normalize_rows(Matrix& m, const char* what) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double norm_sq = 0.0;
        const auto r = m.row(i);
        for (double v : r) norm_sq += v * v;
        const double norm = std::sqrt(norm_sq);
        if (!(norm > 1e-300)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%s row %zu has zero norm", what, i);
            throw Error(ErrorKind::ZeroVector, buf);
        }
        for (double& v : m.row(i)) v /= norm;
    }
}

}  // namespace

KnnIndex fit_knn(const Matrix& features, std::size_t k) {
    if (features.rows() == 0) throw Error(ErrorKind::EmptyInput, "empty KNN bank");
    require_finite(features, "features");
    if (k < 1 || k > features.rows()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "k=%zu with bank of %zu rows", k,
                      features.rows());
        throw Error(ErrorKind::KTooLarge, buf);
    }
    KnnIndex idx;
    idx.bank = features;
    idx.k = k;
    normalize_rows(idx.bank, "KNN bank");
    return idx;
}

ScoreVector score_knn(const KnnIndex& index, const Matrix& features) {
    require_dim(features, index.bank.cols(), "score_knn");
    require_finite(features, "features");
    Matrix queries = features;
    normalize_rows(queries, "query");

    const std::size_t m = index.bank.rows();
    ScoreVector out{ScorerId::Knn, std::vector<double>(queries.rows())};
    std::vector<double> dist_sq(m);
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        const auto q = queries.row(i);
        for (std::size_t r = 0; r < m; ++r) {
            const auto b = index.bank.row(r);
            double sum = 0.0;
            for (std::size_t j = 0; j < q.size(); ++j) {
                const double diff = q[j] - b[j];
                sum += diff * diff;
            }
            dist_sq[r] = sum;
        }
        auto kth = dist_sq.begin() + static_cast<std::ptrdiff_t>(index.k - 1);
        std::nth_element(dist_sq.begin(), kth, dist_sq.end());
        out.values[i] = -std::sqrt(*kth);
    }
    return out;
}

PcaModel fit_pca(const Matrix& features, std::size_t n_pc) {
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    if (n == 0) throw Error(ErrorKind::EmptyInput, "empty PCA input");
    require_finite(features, "features");
    if (n_pc < 1 || n_pc >= d)
        throw Error(ErrorKind::BadArgument, "n_pc must be in [1, D)");

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += r[j];
    }
    for (double& v : model.mean) v /= static_cast<double>(n);

    Matrix scatter(d, d);
    {
        auto acc = detail::map(scatter);
        constexpr std::size_t kChunk = 4096;
        Matrix centered(std::min(kChunk, n), d);
        for (std::size_t start = 0; start < n; start += kChunk) {
            const std::size_t rows = std::min(kChunk, n - start);
            for (std::size_t r = 0; r < rows; ++r) {
                const auto src = features.row(start + r);
                auto dst = centered.row(r);
                for (std::size_t j = 0; j < d; ++j) dst[j] = src[j] - model.mean[j];
            }
            const auto x = detail::map(centered).topRows(static_cast<Eigen::Index>(rows));
            acc.noalias() += x.transpose() * x;
        }
    }
    const SymmetricEig eig = symmetric_eig(scatter);
    model.principal_basis = Matrix(d, n_pc);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n_pc; ++j)
            model.principal_basis(i, j) = eig.eigenvectors(i, j);
    return model;
}

ScoreVector score_pr(const PcaModel& model, const Matrix& features) {
    const std::size_t d = model.mean.size();
    require_dim(features, d, "score_pr");
    require_finite(features, "features");

    Matrix centered = features;
    for (std::size_t i = 0; i < centered.rows(); ++i) {
        auto r = centered.row(i);
        for (std::size_t j = 0; j < d; ++j) r[j] -= model.mean[j];
    }
    const Matrix coeff = matmul(centered, model.principal_basis);
    const Matrix back = matmul(coeff, transpose(model.principal_basis));

    ScoreVector out{ScorerId::Pr, std::vector<double>(features.rows())};
    for (std::size_t i = 0; i < centered.rows(); ++i) {
        double sum = 0.0;
        const auto cr = centered.row(i);
        const auto br = back.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double r = cr[j] - br[j];
            sum += r * r;
        }
        out.values[i] = -std::sqrt(sum);
    }
    return out;
}

namespace {

void require_logits(const Matrix& logits) {
    if (logits.rows() == 0 || logits.cols() == 0)
        throw Error(ErrorKind::EmptyInput, "empty logits matrix");
    require_finite(logits, "logits");
}

}  // namespace

ScoreVector score_msp(const Matrix& logits) {
    require_logits(logits);
    ScoreVector out{ScorerId::Msp, std::vector<double>(logits.rows())};
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const auto r = logits.row(i);
        const double m = *std::max_element(r.begin(), r.end());
        double denom = 0.0;
        for (double v : r) denom += std::exp(v - m);
        out.values[i] = 1.0 / denom;
    }
    return out;
}

ScoreVector score_energy(const Matrix& logits, double temperature) {
    require_logits(logits);
    if (!(temperature > 0.0))
        throw Error(ErrorKind::BadArgument, "temperature must be > 0");
    ScoreVector out{ScorerId::Energy, std::vector<double>(logits.rows())};
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const auto r = logits.row(i);
        const double m = *std::max_element(r.begin(), r.end());
        double sum = 0.0;
        for (double v : r) sum += std::exp((v - m) / temperature);
        out.values[i] = m + temperature * std::log(sum);
    }
    return out;
}

ScoreVector score_maxlogit(const Matrix& logits) {
    require_logits(logits);
    ScoreVector out{ScorerId::MaxLogit, std::vector<double>(logits.rows())};
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const auto r = logits.row(i);
        out.values[i] = *std::max_element(r.begin(), r.end());
    }
    return out;
}

}  // namespace wdisc::scoring
