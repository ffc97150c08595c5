#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "grdmf/error.hpp"
#include "grdmf/linalg.hpp"
#include "test_support.hpp"

using namespace grdmf;
using grdmf::testing::random_matrix;
using grdmf::testing::random_spd;
using grdmf::testing::random_symmetric;

namespace {

double orthogonality_error(const Matrix& q) {
    Matrix g = matmul_tn(q, q);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

}  // namespace

TEST_CASE("sym_eigen on identity and diagonal matrices") {
    const SymEigen id = sym_eigen(Matrix::identity(3));
    CHECK(id.values == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(orthogonality_error(id.vectors) <= 1e-12);

    const SymEigen d = sym_eigen(Matrix{{2.0, 0.0}, {0.0, -1.0}});
    CHECK(d.values == std::vector<double>{-1.0, 2.0});
    CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(d.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eigen reconstructs random symmetric matrices") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 6u, 17u, 40u}) {
        const Matrix a = random_symmetric(rng, n);
        const SymEigen e = sym_eigen(a);
        CHECK(std::is_sorted(e.values.begin(), e.values.end()));
        CHECK(orthogonality_error(e.vectors) <= 1e-10 * static_cast<double>(n));
        CHECK(frobenius_norm(reconstruct(e) - a) <= 1e-9 * (1.0 + frobenius_norm(a)));
    }
}

TEST_CASE("sym_eigen eigenvalues agree with Eigen's self-adjoint solver") {
    std::mt19937_64 rng(12);
    const Matrix a = random_symmetric(rng, 9);
    const SymEigen e = sym_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(grdmf::testing::to_eigen(a));
    for (std::size_t k = 0; k < 9; ++k) CHECK(e.values[k] == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-10));
}

TEST_CASE("sym_eigen is bit-for-bit repeatable") {
    std::mt19937_64 rng(13);
    const Matrix a = random_symmetric(rng, 12);
    const SymEigen x = sym_eigen(a);
    const SymEigen y = sym_eigen(a);
    CHECK(x.values == y.values);
    CHECK(x.vectors == y.vectors);
}

TEST_CASE("sym_eigen rejects non-square and asymmetric input") {
    CHECK_THROWS_AS(sym_eigen(Matrix(2, 3)), DimensionError);
    CHECK_THROWS_AS(sym_eigen(Matrix{{1.0, 2.0}, {0.0, 1.0}}), SymmetryError);
}

TEST_CASE("truncated_svd of a rank-one outer product") {
    std::vector<double> u{0.6, 0.8, 0.0};
    std::vector<double> v{0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    Matrix a(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = 5.0 * u[i] * v[j];
    const TruncatedSvd s = truncated_svd(a, 1);
    CHECK(s.singular[0] == doctest::Approx(frobenius_norm(a)).epsilon(1e-12));
    CHECK(frobenius_norm(s.reconstruct() - a) <= 1e-12);
}

TEST_CASE("truncated_svd of a diagonal matrix keeps the leading values") {
    const TruncatedSvd s = truncated_svd(Matrix{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}, 2);
    REQUIRE(s.singular.size() == 2);
    CHECK(s.singular[0] == doctest::Approx(3.0));
    CHECK(s.singular[1] == doctest::Approx(2.0));
}

TEST_CASE("truncated_svd full rank: squared singular values match the eigenvalues of AᵀA") {
    std::mt19937_64 rng(21);
    const Matrix a = random_matrix(rng, 8, 5);
    const TruncatedSvd s = truncated_svd(a, 5);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(grdmf::testing::to_eigen(matmul_tn(a, a)));
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(s.singular[k] * s.singular[k] == doctest::Approx(gram.eigenvalues()(4 - static_cast<int>(k))).epsilon(1e-10));
    }
    CHECK(std::is_sorted(s.singular.rbegin(), s.singular.rend()));
    CHECK(orthogonality_error(s.left) <= 1e-9);
    CHECK(orthogonality_error(s.right) <= 1e-9);
    CHECK(frobenius_norm(s.reconstruct() - a) <= 1e-8 * frobenius_norm(a));
}

TEST_CASE("truncated_svd on wide and rank-deficient inputs") {
    std::mt19937_64 rng(22);
    const Matrix wide = random_matrix(rng, 4, 9);
    const TruncatedSvd w = truncated_svd(wide, 4);
    CHECK(frobenius_norm(w.reconstruct() - wide) <= 1e-8 * frobenius_norm(wide));

    // Rank 2 embedded in 7×5: the trailing vectors are completed orthonormally.
    const Matrix low = matmul(random_matrix(rng, 7, 2), random_matrix(rng, 2, 5));
    const TruncatedSvd l = truncated_svd(low, 5);
    CHECK(l.singular[2] == 0.0);
    CHECK(l.singular[4] == 0.0);
    CHECK(orthogonality_error(l.left) <= 1e-9);
    CHECK(orthogonality_error(l.right) <= 1e-9);
    CHECK(frobenius_norm(l.reconstruct() - low) <= 1e-8 * frobenius_norm(low));

    const TruncatedSvd z = truncated_svd(Matrix(3, 3), 2);
    CHECK(z.singular == std::vector<double>{0.0, 0.0});
    CHECK(orthogonality_error(z.left) <= 1e-12);
}

TEST_CASE("truncated_svd is the best rank-r approximation") {
    std::mt19937_64 rng(23);
    const Matrix a = random_matrix(rng, 10, 6);
    const TruncatedSvd full = truncated_svd(a, 6);
    const TruncatedSvd s = truncated_svd(a, 3);
    double tail = 0.0;
    for (std::size_t k = 3; k < 6; ++k) tail += full.singular[k] * full.singular[k];
    CHECK(frobenius_norm_sq(a - s.reconstruct()) == doctest::Approx(tail).epsilon(1e-9));
}

TEST_CASE("truncated_svd rejects out-of-range rank") {
    CHECK_THROWS_AS(truncated_svd(Matrix(3, 2), 0), ParameterError);
    CHECK_THROWS_AS(truncated_svd(Matrix(3, 2), 3), ParameterError);
}

TEST_CASE("solve_sylvester_sym closed-form cases") {
    const Matrix x1 = solve_sylvester_sym(2.0 * Matrix::identity(2), Matrix(2, 2), Matrix{{2, 4}, {6, 8}});
    CHECK(frobenius_norm(x1 - Matrix{{1, 2}, {3, 4}}) <= 1e-14);

    const Matrix x2 = solve_sylvester_sym(Matrix::identity(2), Matrix::identity(2), 2.0 * Matrix::identity(2));
    CHECK(frobenius_norm(x2 - Matrix::identity(2)) <= 1e-14);
}

TEST_CASE("solve_sylvester_sym matches the Kronecker oracle") {
    std::mt19937_64 rng(31);
    const Matrix a = random_spd(rng, 5);
    const Matrix b = random_spd(rng, 4);
    const Matrix c = random_matrix(rng, 5, 4);
    const Matrix x = solve_sylvester_sym(a, b, c);
    CHECK(frobenius_norm(x - grdmf::testing::kronecker_sylvester(a, b, c)) <= 1e-8);
    CHECK(frobenius_norm(matmul(a, x) + matmul(x, b) - c) <= 1e-8 * (1.0 + frobenius_norm(c)));
}

TEST_CASE("solve_sylvester_sym property: 100 random instances agree with the oracle") {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = size(rng);
        const std::size_t m = size(rng);
        const Matrix a = random_spd(rng, n);
        const Matrix b = random_spd(rng, m);
        const Matrix c = random_matrix(rng, n, m);
        CHECK(frobenius_norm(solve_sylvester_sym(a, b, c) - grdmf::testing::kronecker_sylvester(a, b, c)) <= 1e-8);
    }
}

TEST_CASE("solve_sylvester_sym errors") {
    CHECK_THROWS_AS(solve_sylvester_sym(Matrix::identity(2), Matrix::identity(3), Matrix(3, 3)), DimensionError);
    CHECK_THROWS_AS(solve_sylvester_sym(Matrix(2, 2), Matrix(2, 2), Matrix(2, 2)), SingularSystemError);
    CHECK_THROWS_AS(solve_sylvester_sym(Matrix{{1, 0}, {0, -1}}, Matrix::identity(1), Matrix(2, 1)),
                    SingularSystemError);
}

TEST_CASE("spd_inverse") {
    SpdInverse id = spd_inverse(Matrix::identity(3));
    CHECK(frobenius_norm(id.inverse - Matrix::identity(3)) <= 1e-14);
    CHECK(id.floored == 0);

    SpdInverse d = spd_inverse(Matrix{{2, 0}, {0, 4}});
    CHECK(frobenius_norm(d.inverse - Matrix{{0.5, 0}, {0, 0.25}}) <= 1e-14);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix u = random_matrix(rng, 10, 4);
        const Matrix g = symmetrized(matmul_tn(u, u));
        const SpdInverse inv = spd_inverse(g);
        CHECK(inv.floored == 0);
        CHECK(frobenius_norm(matmul(g, inv.inverse) - Matrix::identity(4)) <= 1e-8 * 4);
        CHECK(frobenius_norm(matmul(inv.inverse, g) - Matrix::identity(4)) <= 1e-8 * 4);
    }
}

TEST_CASE("spd_inverse floors singular Gram matrices") {
    Matrix u(5, 3);
    u(0, 0) = 1.0;
    u(1, 1) = 2.0;  // third column zero
    const SpdInverse inv = spd_inverse(matmul_tn(u, u));
    CHECK(inv.floored == 1);
    CHECK(inv.inverse(2, 2) == doctest::Approx(1.0 / (1e-10 * 4.0)));

    const SpdInverse zero = spd_inverse(Matrix(2, 2));
    CHECK(zero.floored == 2);
    CHECK(zero.inverse(0, 0) == doctest::Approx(1e10));
}
