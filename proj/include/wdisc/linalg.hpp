#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wdisc/error.hpp"

namespace wdisc {

/// Dense row-major matrix of doubles. All numeric work in the library runs in
/// 64-bit precision regardless of the on-disk dtype.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw Error(ErrorKind::DimMismatch, "matrix payload length does not match rows*cols");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& values() const noexcept { return data_; }

    bool all_finite() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Eigendecomposition of a symmetric matrix. Eigenvalues are sorted
/// descending; column i of `eigenvectors` pairs with `eigenvalues[i]` and the
/// columns are orthonormal.
struct SymmetricEig {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Decomposes a square symmetric matrix. The input is symmetrized as
/// (A + A^T)/2 first; asymmetry beyond 1e-6 in max norm is rejected.
SymmetricEig symmetric_eig(const Matrix& a);

/// Inverse square root of a symmetric PSD matrix on its numerical support:
/// V_r diag(lambda_r^{-1/2}) V_r^T over eigenvalues above rel_tol * lambda_max.
Matrix pinv_sqrt(const Matrix& a, double rel_tol);

/// Pseudo-inverse of a symmetric PSD matrix with the same retention rule.
Matrix pinv_psd(const Matrix& a, double rel_tol);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> mat_vec(const Matrix& a, std::span<const double> v);
double frobenius_norm(const Matrix& a);

}  // namespace wdisc
