#pragma once

#include <cstddef>
#include <vector>

#include "grdmf/matrix.hpp"

namespace grdmf {

/// Eigendecomposition a = vectors · diag(values) · vectorsᵀ, values ascending.
struct SymEigen {
    Matrix vectors;
    std::vector<double> values;
};

/// Rank-r factorization left · diag(singular) · rightᵀ, singular values descending.
struct TruncatedSvd {
    Matrix left;
    std::vector<double> singular;
    Matrix right;

    Matrix reconstruct() const;
};

struct SpdInverse {
    Matrix inverse;
    /// Number of eigenvalues raised to the floor before inversion.
    std::size_t floored = 0;
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps run in a fixed
/// (p, q) order until the off-diagonal norm drops below 1e-12 · ‖a‖_F, so the
/// result is reproducible bit for bit. Throws SymmetryError when
/// ‖a − aᵀ‖_F > 1e-8 · (1 + ‖a‖_F); the symmetric part is decomposed otherwise.
SymEigen sym_eigen(const Matrix& a);

/// Leading r singular triplets, computed from the eigendecomposition of the
/// smaller Gram matrix. Singular values below 1e-12 · σ_max are set to zero
/// and their vectors completed to an orthonormal set.
TruncatedSvd truncated_svd(const Matrix& a, std::size_t r);

/// Solves a·x + x·b = c for symmetric a (n×n) and b (m×m) by diagonalizing
/// both sides. Throws SingularSystemError when some λa_i + λb_j < 1e-12.
Matrix solve_sylvester_sym(const Matrix& a, const Matrix& b, const Matrix& c);

/// Inverse of a symmetric positive (semi)definite matrix with eigenvalues
/// floored at 1e-10 · λ_max (1e-10 when λ_max ≤ 0).
SpdInverse spd_inverse(const Matrix& a);

Matrix reconstruct(const SymEigen& e);

}  // namespace grdmf
