#include "wdisc/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "eigen_map.hpp"
#include "wdisc/rng.hpp"

namespace wdisc::stats {

namespace {
constexpr std::size_t kChunkRows = 4096;
}

std::size_t validate_labels(const LabeledFeatures& data) {
    const std::size_t n = data.features.rows();
    if (n == 0) throw Error(ErrorKind::EmptyInput, "no feature rows");
    if (data.labels.size() != n) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%zu labels for %zu feature rows",
                      data.labels.size(), n);
        throw Error(ErrorKind::DimMismatch, buf);
    }
    std::int32_t max_label = -1;
    for (std::int32_t y : data.labels) {
        if (y < 0) throw Error(ErrorKind::BadArgument, "negative class label");
        max_label = std::max(max_label, y);
    }
    const std::size_t c = static_cast<std::size_t>(max_label) + 1;
    std::vector<std::size_t> counts(c, 0);
    for (std::int32_t y : data.labels) ++counts[static_cast<std::size_t>(y)];
    for (std::size_t k = 0; k < c; ++k) {
        if (counts[k] == 0) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "class %zu has no samples", k);
            throw Error(ErrorKind::EmptyClass, buf);
        }
    }
    return c;
}

LabeledFeatures balanced_subsample(const LabeledFeatures& data, std::size_t n_target,
                                   std::uint64_t seed) {
    const std::size_t c = validate_labels(data);
    const std::size_t n = data.features.rows();
    if (n_target < c)
        throw Error(ErrorKind::BadArgument,
                    "subsample target smaller than the number of classes");
    if (n_target >= n) return data;

    std::vector<std::vector<std::size_t>> by_class(c);
    for (std::size_t i = 0; i < n; ++i)
        by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);

    // Per-class share: floor(n_target/c), with the remainder spread over the
    // lowest class ids. A class short of its share gives all it has.
    const std::size_t base = n_target / c;
    const std::size_t extra = n_target % c;

    Rng rng(seed);
    std::vector<std::size_t> keep;
    keep.reserve(n_target);
    for (std::size_t k = 0; k < c; ++k) {
        auto& idx = by_class[k];
        const std::size_t share = base + (k < extra ? 1 : 0);
        if (idx.size() > share) {
            rng.shuffle(idx);
            idx.resize(share);
            std::sort(idx.begin(), idx.end());
        }
        keep.insert(keep.end(), idx.begin(), idx.end());
    }
    std::sort(keep.begin(), keep.end());

    const std::size_t d = data.features.cols();
    LabeledFeatures out;
    out.features = Matrix(keep.size(), d);
    out.labels.resize(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const auto src = data.features.row(keep[r]);
        std::copy(src.begin(), src.end(), out.features.row(r).begin());
        out.labels[r] = data.labels[keep[r]];
    }
    return out;
}

DatasetStats fit_stats(const LabeledFeatures& data) {
    const std::size_t c = validate_labels(data);
    const std::size_t n = data.features.rows();
    const std::size_t d = data.features.cols();
    if (c < 2)
        throw Error(ErrorKind::EmptyClass,
                    "fitting requires at least two classes, got one");
    if (!data.features.all_finite())
        throw Error(ErrorKind::NonFinite, "feature matrix contains NaN or Inf");

    DatasetStats st;
    st.class_counts.assign(c, 0);
    st.total = n;
    st.class_means = Matrix(c, d);
    st.global_mean.assign(d, 0.0);

    // Pass 1: per-class sums -> means.
    for (std::size_t i = 0; i < n; ++i) {
        const auto y = static_cast<std::size_t>(data.labels[i]);
        ++st.class_counts[y];
        const auto row = data.features.row(i);
        auto mean_row = st.class_means.row(y);
        for (std::size_t j = 0; j < d; ++j) mean_row[j] += row[j];
    }
    for (std::size_t k = 0; k < c; ++k) {
        const double inv = 1.0 / static_cast<double>(st.class_counts[k]);
        auto mean_row = st.class_means.row(k);
        for (std::size_t j = 0; j < d; ++j) {
            mean_row[j] *= inv;
            st.global_mean[j] +=
                mean_row[j] * static_cast<double>(st.class_counts[k]);
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        st.global_mean[j] /= static_cast<double>(n);

    // Pass 2: within-class scatter, accumulated over row chunks so the
    // centered copy stays small.
    st.s_w = Matrix(d, d);
    {
        auto sw = detail::map(st.s_w);
        Matrix centered(std::min(kChunkRows, n), d);
        for (std::size_t start = 0; start < n; start += kChunkRows) {
            const std::size_t rows = std::min(kChunkRows, n - start);
            for (std::size_t r = 0; r < rows; ++r) {
                const auto src = data.features.row(start + r);
                const auto mu =
                    st.class_means.row(static_cast<std::size_t>(data.labels[start + r]));
                auto dst = centered.row(r);
                for (std::size_t j = 0; j < d; ++j) dst[j] = src[j] - mu[j];
            }
            const auto x = detail::map(centered).topRows(static_cast<Eigen::Index>(rows));
            sw.noalias() += x.transpose() * x;
        }
    }

    // Between-class scatter straight from the class means.
    st.s_b = Matrix(d, d);
    {
        auto sb = detail::map(st.s_b);
        Eigen::VectorXd dev(static_cast<Eigen::Index>(d));
        for (std::size_t k = 0; k < c; ++k) {
            const auto mu = st.class_means.row(k);
            for (std::size_t j = 0; j < d; ++j)
                dev(static_cast<Eigen::Index>(j)) = mu[j] - st.global_mean[j];
            sb.noalias() +=
                static_cast<double>(st.class_counts[k]) * dev * dev.transpose();
        }
    }
    return st;
}

}  // namespace wdisc::stats
