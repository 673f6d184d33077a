#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wdisc/linalg.hpp"
#include "wdisc/rng.hpp"

using namespace wdisc;

namespace {

// Closed-form eigendecomposition oracle for [[a, b], [b, a]] with b > 0:
// eigenvalues a+b, a-b with eigenvectors [1,1]/sqrt(2), [1,-1]/sqrt(2),
// straight from the characteristic polynomial.
struct TwoByTwoOracle {
    double hi, lo;
};
TwoByTwoOracle oracle_2x2(double a, double b) { return {a + b, a - b}; }

double column_dot(const Matrix& m, std::size_t c1, std::size_t c2) {
    double dot = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) dot += m(r, c1) * m(r, c2);
    return dot;
}

Matrix reconstruct(const SymmetricEig& eig) {
    const std::size_t n = eig.eigenvalues.size();
    Matrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = eig.eigenvalues[i];
    return matmul(eig.eigenvectors, matmul(lambda, transpose(eig.eigenvectors)));
}

}  // namespace

TEST_CASE("symmetric_eig identity") {
    const auto eig = symmetric_eig(Matrix::identity(3));
    for (double v : eig.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(test::rel_frobenius_diff(matmul(eig.eigenvectors, transpose(eig.eigenvectors)),
                                   Matrix::identity(3)) < 1e-12);
}

TEST_CASE("symmetric_eig diagonal") {
    Matrix a(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 1.0;
    const auto eig = symmetric_eig(a);
    CHECK(eig.eigenvalues[0] == doctest::Approx(4.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.eigenvectors(1, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("symmetric_eig matches 2x2 closed form") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const auto oracle = oracle_2x2(2.0, 1.0);
    const auto eig = symmetric_eig(a);
    CHECK(eig.eigenvalues[0] == doctest::Approx(oracle.hi).epsilon(1e-12));  // 3
    CHECK(eig.eigenvalues[1] == doctest::Approx(oracle.lo).epsilon(1e-12));  // 1
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(inv_sqrt2));
    // Top eigenvector has equal signs, the second opposite signs.
    CHECK(eig.eigenvectors(0, 0) * eig.eigenvectors(1, 0) > 0.0);
    CHECK(eig.eigenvectors(0, 1) * eig.eigenvectors(1, 1) < 0.0);
}

TEST_CASE("symmetric_eig rejects bad inputs") {
    CHECK_THROWS_AS(symmetric_eig(Matrix(2, 3)), Error);
    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    asym(1, 0) = 0.5;
    CHECK_THROWS_AS(symmetric_eig(asym), Error);
    try {
        symmetric_eig(asym);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotSymmetric);
    }
}

TEST_CASE("symmetric_eig tolerates tiny asymmetry") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0 + 1e-9;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const auto eig = symmetric_eig(a);
    CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("symmetric_eig reconstruction and orthonormality on random matrices") {
    Rng rng(41);
    for (std::size_t n : {1u, 2u, 5u, 17u, 64u, 256u, 512u}) {
        const Matrix a = test::random_symmetric(rng, n, 2.0);
        const auto eig = symmetric_eig(a);
        for (std::size_t i = 1; i < n; ++i)
            CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);
        CHECK(test::rel_frobenius_diff(a, reconstruct(eig)) <= 1e-8);
        for (std::size_t i = 0; i < std::min<std::size_t>(n, 8); ++i) {
            CHECK(std::abs(column_dot(eig.eigenvectors, i, i) - 1.0) <= 1e-8);
            for (std::size_t j = i + 1; j < std::min<std::size_t>(n, 8); ++j)
                CHECK(std::abs(column_dot(eig.eigenvectors, i, j)) <= 1e-8);
        }
    }
}

TEST_CASE("pinv_sqrt identity and rank-deficient diagonal") {
    CHECK(test::rel_frobenius_diff(pinv_sqrt(Matrix::identity(4), 1e-10),
                                   Matrix::identity(4)) < 1e-12);

    Matrix a(2, 2);
    a(0, 0) = 4.0;
    const Matrix m = pinv_sqrt(a, 1e-10);
    CHECK(m(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m(0, 1) == doctest::Approx(0.0));
    CHECK(m(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("pinv_sqrt maps eigenvalues through lambda^-1/2") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const auto eig = symmetric_eig(pinv_sqrt(a, 1e-12));
    // Eigenvalues 3, 1 map to 1/sqrt(3), 1 (and the order flips).
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("pinv_sqrt rejects indefinite input") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    CHECK_THROWS_AS(pinv_sqrt(a, 1e-10), Error);
    try {
        pinv_sqrt(a, 1e-10);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPSD);
    }
}

TEST_CASE("pinv_sqrt support-projector identity on random PSD matrices") {
    Rng rng(42);
    for (std::size_t n : {2u, 8u, 33u, 128u}) {
        const Matrix a = test::random_psd(rng, n);
        const Matrix m = pinv_sqrt(a, 1e-10);
        // M A M should reproduce the support projector; full rank here, so I.
        const Matrix mam = matmul(m, matmul(a, m));
        CHECK(test::rel_frobenius_diff(mam, Matrix::identity(n)) <= 1e-6);
    }
}

TEST_CASE("pinv_sqrt respects the relative retention cutoff") {
    // Eigenvalues 1 and 1e-8: rel_tol 1e-4 discards the small one.
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-8;
    const Matrix m = pinv_sqrt(a, 1e-4);
    CHECK(m(0, 0) == doctest::Approx(1.0));
    CHECK(m(1, 1) == doctest::Approx(0.0));
    const Matrix full = pinv_sqrt(a, 1e-10);
    CHECK(full(1, 1) == doctest::Approx(1e4).epsilon(1e-10));
}

TEST_CASE("pinv_psd inverts on the support") {
    Rng rng(7);
    const Matrix a = test::random_psd(rng, 6);
    const Matrix inv = pinv_psd(a, 1e-12);
    CHECK(test::rel_frobenius_diff(matmul(inv, a), Matrix::identity(6)) <= 1e-8);
}

TEST_CASE("matmul basics and dimension checks") {
    Rng rng(3);
    const Matrix a = test::random_matrix(rng, 3, 4);
    CHECK(matmul(Matrix::identity(3), a) == a);
    CHECK_THROWS_AS(matmul(a, a), Error);

    Matrix b(2, 2);
    b(0, 0) = 1.0;
    b(0, 1) = 2.0;
    b(1, 0) = 3.0;
    b(1, 1) = 4.0;
    const std::vector<double> v{1.0, 1.0};
    const auto prod = mat_vec(b, v);
    CHECK(prod[0] == doctest::Approx(3.0));
    CHECK(prod[1] == doctest::Approx(7.0));
    CHECK_THROWS_AS(mat_vec(b, std::vector<double>{1.0}), Error);
}

TEST_CASE("transpose is an involution") {
    Rng rng(5);
    const Matrix a = test::random_matrix(rng, 4, 7);
    CHECK(transpose(transpose(a)) == a);
}

TEST_CASE("frobenius_norm matches hand case") {
    Matrix a(1, 2);
    a(0, 0) = 3.0;
    a(0, 1) = 4.0;
    CHECK(frobenius_norm(a) == doctest::Approx(5.0));
}

TEST_CASE("matrix rejects mismatched payload") {
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), Error);
}
