#include "wdisc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eigen_map.hpp"

namespace wdisc {

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

namespace {

constexpr double kAsymmetryTol = 1e-6;

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s expects a square matrix, got %zux%zu",
                      what, a.rows(), a.cols());
        throw Error(ErrorKind::NonSquare, buf);
    }
}

// Symmetrize and reject inputs that are asymmetric beyond tolerance.
Matrix symmetrized(const Matrix& a, const char* what) {
    require_square(a, what);
    const std::size_t n = a.rows();
    double worst = 0.0;
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = a(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
            const double v = 0.5 * (a(i, j) + a(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    if (worst > kAsymmetryTol) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "%s: max |A - A^T| entry %.3e exceeds %.1e", what, worst,
                      kAsymmetryTol);
        throw Error(ErrorKind::NotSymmetric, buf);
    }
    return s;
}

// Shared by pinv_sqrt / pinv_psd: V_r f(lambda_r) V_r^T over the retained
// support, where f maps each kept eigenvalue.
template <typename F>
Matrix spectral_apply(const Matrix& a, double rel_tol, const char* what, F f) {
    const SymmetricEig eig = symmetric_eig(symmetrized(a, what));
    const std::size_t n = a.rows();
    if (n == 0) return Matrix(0, 0);

    const double lmax = eig.eigenvalues.front();
    if (!eig.eigenvalues.empty() && eig.eigenvalues.back() < -1e-8 * std::max(lmax, 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s: eigenvalue %.6e is negative beyond PSD tolerance "
                      "(lambda_max %.6e)",
                      what, eig.eigenvalues.back(), lmax);
        throw Error(ErrorKind::NotPSD, buf);
    }

    std::vector<double> mapped(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = eig.eigenvalues[i];
        if (lambda > rel_tol * lmax) mapped[i] = f(lambda);
    }

    // V diag(mapped) V^T
    const auto v = detail::map(eig.eigenvectors);
    Matrix out(n, n);
    detail::map(out) = v * Eigen::Map<const Eigen::VectorXd>(mapped.data(), n).asDiagonal() *
                       v.transpose();
    return out;
}

}  // namespace

SymmetricEig symmetric_eig(const Matrix& a) {
    const Matrix s = symmetrized(a, "symmetric_eig");
    const std::size_t n = s.rows();
    SymmetricEig out;
    out.eigenvectors = Matrix(n, n);
    out.eigenvalues.resize(n);
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<detail::EigenRowMajor> solver(detail::map(s));
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NotConverged, "symmetric_eig: eigensolver did not converge");

    // Eigen sorts ascending; flip to descending.
    for (std::size_t i = 0; i < n; ++i) {
        out.eigenvalues[i] = solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
        for (std::size_t r = 0; r < n; ++r)
            out.eigenvectors(r, i) =
                solver.eigenvectors()(static_cast<Eigen::Index>(r),
                                      static_cast<Eigen::Index>(n - 1 - i));
    }
    return out;
}

Matrix pinv_sqrt(const Matrix& a, double rel_tol) {
    return spectral_apply(a, rel_tol, "pinv_sqrt",
                          [](double lambda) { return 1.0 / std::sqrt(lambda); });
}

Matrix pinv_psd(const Matrix& a, double rel_tol) {
    return spectral_apply(a, rel_tol, "pinv_psd",
                          [](double lambda) { return 1.0 / lambda; });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "matmul: %zux%zu times %zux%zu", a.rows(),
                      a.cols(), b.rows(), b.cols());
        throw Error(ErrorKind::DimMismatch, buf);
    }
    Matrix out(a.rows(), b.cols());
    detail::map(out) = detail::map(a) * detail::map(b);
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    detail::map(out) = detail::map(a).transpose();
    return out;
}

std::vector<double> mat_vec(const Matrix& a, std::span<const double> v) {
    if (a.cols() != v.size()) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "mat_vec: %zux%zu times vector of length %zu",
                      a.rows(), a.cols(), v.size());
        throw Error(ErrorKind::DimMismatch, buf);
    }
    std::vector<double> out(a.rows());
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) =
        detail::map(a) *
        Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    return out;
}

double frobenius_norm(const Matrix& a) {
    return detail::map(a).norm();
}

}  // namespace wdisc
