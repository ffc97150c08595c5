#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "grdmf/error.hpp"
#include "grdmf/graph.hpp"
#include "grdmf/matrix.hpp"

namespace grdmf {

struct HyperParams {
    /// Graph regularization weight μ ≥ 0.
    double mu = 0.0;
    /// Coupling weight ϑ > 0 between X and the factor product.
    double theta = 1.0;
    /// Gradient stepsize of the X update, strictly inside (0, 2).
    double alpha = 0.5;
    /// Proximal weight ς. Fixed.
    static constexpr double sigma = 1.0;
    /// Neighbour count for similarity sparsification.
    std::size_t p = 2;
    /// Latent sizes (k1, k2[, k3, ...]); two entries give the 2-layer model.
    std::vector<std::size_t> dims;
    /// Number of HyPALM iterations K.
    std::size_t iters = 10;

    void validate() const;
    std::size_t layers() const noexcept { return dims.size(); }
};

/// U1 (m×k1), inner factors (k1×k2, k2×k3, ...), V (k_last×n).
struct FactorSet {
    Matrix u1;
    std::vector<Matrix> middles;
    Matrix v;

    std::size_t count() const noexcept { return middles.size() + 2; }
    const Matrix& at(std::size_t index) const;
    Matrix& at(std::size_t index);

    /// Product of factors [first, last), first < last ≤ count().
    Matrix partial_product(std::size_t first, std::size_t last) const;
    Matrix product() const { return partial_product(0, count()); }

    /// Throws DimensionError when consecutive factors do not chain.
    void validate() const;
};

struct SolveTrace {
    /// F after initialization followed by F after each iteration.
    std::vector<double> loss;
    std::size_t floor_events = 0;
    double wall_time = 0.0;
};

struct FitResult {
    Matrix x;
    FactorSet factors;
    SolveTrace trace;
};

/// Emitted after every block update when an observer is attached to a fit.
struct BlockEvent {
    std::size_t iteration = 0;
    /// "x", "u1", "u2", ..., "v".
    std::string block;
    double loss_before = 0.0;
    double loss_after = 0.0;
    /// ‖new − previous‖_F² of the updated block.
    double step_sq = 0.0;
};

using BlockObserver = std::function<void(const BlockEvent&)>;

/// Raised by fit when a kernel fails; the kernel error is nested.
class FitError : public Error {
public:
    FitError(std::size_t iteration, const std::string& what);
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// ‖Y − M⊙X‖² + ϑ‖X − U1⋯V‖² + 2μ tr(U1ᵀ L_d U1) + 2μ tr(V L_v Vᵀ).
double objective(const Matrix& x, const FactorSet& factors, const Matrix& y, const Matrix& mask,
                 const LaplacianMatrix& l_d, const LaplacianMatrix& l_v, double mu, double theta);

/// Deterministic SVD initialization. The rank-k1 SVD of y gives
/// U1 = P·Σ^{1/2} and a remainder Σ^{1/2}·Qᵀ, which is split the same way for
/// each following dimension; the last remainder is V. For non-increasing
/// dims the full product is the rank-k_last truncated SVD of y.
FactorSet init_factors(const Matrix& y, std::span<const std::size_t> dims);

/// Gradient step on the data term followed by the nonnegative prox:
/// max{(B + ϑ·product)/(1 + ϑ), 0} with B = X + α·M⊙(Y − M⊙X).
Matrix update_x(const Matrix& x, const Matrix& product, const Matrix& y, const Matrix& mask, double alpha,
                double theta);

/// sylv{2μL_d + I, ϑ·T·Tᵀ, ϑ·X·Tᵀ + U1_prev} with T the product right of U1.
Matrix update_u1(const Matrix& x, const Matrix& u1_prev, const Matrix& tail, const LaplacianMatrix& l_d, double mu,
                 double theta);

struct MiddleUpdate {
    Matrix factor;
    std::size_t floored = 0;
};

/// With G = (leftᵀ·left)⁻¹: sylv{G, ϑ·R·Rᵀ, ϑ·G·leftᵀ·X·Rᵀ + G·prev}.
MiddleUpdate update_middle(const Matrix& x, const Matrix& factor_prev, const Matrix& left, const Matrix& right,
                           double theta);

/// sylv{ϑ·HᵀH, 2μL_v + I, ϑ·Hᵀ·X + V_prev} with H the product left of V.
Matrix update_v(const Matrix& x, const Matrix& v_prev, const Matrix& head, const LaplacianMatrix& l_v, double mu,
                double theta);

/// HyPALM: SVD initialization, then K sweeps of X, U1, inner factors left to
/// right, V. Always runs exactly hp.iters iterations.
FitResult fit(const Matrix& y, const Matrix& mask, const LaplacianMatrix& l_d, const LaplacianMatrix& l_v,
              const HyperParams& hp, const BlockObserver& observer = {});

/// Same iteration from caller-supplied factors; X starts at y.
FitResult fit_from(const Matrix& y, const Matrix& mask, const LaplacianMatrix& l_d, const LaplacianMatrix& l_v,
                   const HyperParams& hp, FactorSet start, const BlockObserver& observer = {});

}  // namespace grdmf
