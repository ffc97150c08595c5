#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "grdmf/error.hpp"
#include "grdmf/matrix.hpp"

namespace grdmf {

/// Binary entity × feature indicator (drug classes, virus symptoms).
struct FeatureProfile {
    std::vector<std::string> entities;
    std::vector<std::string> features;
    Matrix indicator;

    /// Throws ParameterError / RegistryError when the indicator is not binary,
    /// the shape disagrees with the name lists, or entity names repeat.
    void validate() const;
};

struct SimilarityMatrix {
    std::vector<std::string> entities;
    Matrix values;
};

/// L = D − S. Rows sum to zero and the matrix is positive semidefinite for
/// nonnegative S.
struct LaplacianMatrix {
    Matrix values;
};

/// Cosine similarity between indicator rows. An all-zero row is similar only
/// to itself (diagonal 1, off-diagonal 0) and produces a warning.
SimilarityMatrix cosine_similarity(const FeatureProfile& profile, Warnings* warnings = nullptr);

/// Takes an externally supplied similarity as-is, averaging it with its
/// transpose. Asymmetry beyond 1e-9 is reported as a warning.
SimilarityMatrix ingest_similarity(SimilarityMatrix raw, Warnings* warnings = nullptr);

/// Keeps, for each row, the p largest off-diagonal entries (ties go to the
/// lower column index). An edge survives when either endpoint selected it.
/// Values and the diagonal are left unchanged. Requires 1 ≤ p < n.
SimilarityMatrix sparsify_pnn(const SimilarityMatrix& s, std::size_t p);

/// D − S with D_ii = Σ_j S_ij, the sum including S_ii.
LaplacianMatrix laplacian(const SimilarityMatrix& s);

LaplacianMatrix combine_laplacians(std::span<const LaplacianMatrix> parts);

/// Sparsifies every similarity with the shared p, then sums their Laplacians.
LaplacianMatrix graph_laplacian(std::span<const SimilarityMatrix> similarities, std::size_t p);

}  // namespace grdmf
