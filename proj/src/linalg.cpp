#include "grdmf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grdmf/error.hpp"

namespace grdmf {

namespace {

constexpr double kJacobiTolerance = 1e-12;
constexpr std::size_t kMaxSweeps = 100;
constexpr double kSingularCutoff = 1e-12;
constexpr double kSylvesterMinDenominator = 1e-12;
constexpr double kSpdFloor = 1e-10;

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Orthonormalizes the first `count` columns of q in place with two passes of
// modified Gram-Schmidt. Columns whose norm collapses are replaced by the first
// standard basis vector that is independent of the columns already accepted.
void orthonormalize_columns(Matrix& q, std::size_t count) {
    const std::size_t n = q.rows();
    std::size_t next_basis = 0;
    for (std::size_t j = 0; j < count; ++j) {
        const double original = [&] {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += q(i, j) * q(i, j);
            return std::sqrt(s);
        }();
        auto project_out = [&] {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < j; ++k) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < n; ++i) dot += q(i, k) * q(i, j);
                    for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
                }
            }
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += q(i, j) * q(i, j);
            return std::sqrt(s);
        };
        double norm = original > 0.0 ? project_out() : 0.0;
        if (norm <= 1e-8 * original || original == 0.0) {
            do {
                if (next_basis >= n) {
                    throw SingularSystemError("cannot complete orthonormal basis");
                }
                for (std::size_t i = 0; i < n; ++i) q(i, j) = (i == next_basis) ? 1.0 : 0.0;
                ++next_basis;
                norm = project_out();
            } while (norm <= 1e-8);
        }
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
    }
}

}  // namespace

SymEigen sym_eigen(const Matrix& input) {
    require_square(input, "sym_eigen");
    const double norm = frobenius_norm(input);
    const double skew = asymmetry(input);
    if (skew > 1e-8 * (1.0 + norm)) {
        std::ostringstream os;
        os << "sym_eigen: matrix not symmetric (‖a − aᵀ‖_F = " << skew << ")";
        throw SymmetryError(os.str());
    }
    const std::size_t n = input.rows();
    Matrix a = symmetrized(input);
    Matrix v = Matrix::identity(n);

    const double tol = kJacobiTolerance * norm;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    SymEigen out{Matrix(n, n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

Matrix reconstruct(const SymEigen& e) {
    Matrix scaled = e.vectors;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= e.values[j];
    return matmul_nt(scaled, e.vectors);
}

Matrix TruncatedSvd::reconstruct() const {
    Matrix scaled = left;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= singular[j];
    return matmul_nt(scaled, right);
}

TruncatedSvd truncated_svd(const Matrix& a, std::size_t r) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (r < 1 || r > std::min(m, n)) {
        std::ostringstream os;
        os << "truncated_svd: rank " << r << " outside [1, " << std::min(m, n) << "]";
        throw ParameterError(os.str());
    }

    // Decompose the smaller Gram matrix; `small` holds the vectors on that side.
    const bool tall = m >= n;
    const Matrix gram = tall ? matmul_tn(a, a) : matmul_nt(a, a);
    const SymEigen eig = sym_eigen(symmetrized(gram));
    const std::size_t k = gram.rows();

    // σ_j = ‖a·v_j‖ rather than √λ_j: the square root loses half the digits
    // for small singular values.
    const Matrix all = eig.vectors;
    const Matrix mapped_all = tall ? matmul(a, all) : matmul_tn(a, all);
    std::vector<double> norms(k);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mapped_all.rows(); ++i) s += mapped_all(i, j) * mapped_all(i, j);
        norms[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    std::vector<double> sigma(r);
    Matrix small(k, r);
    Matrix large(mapped_all.rows(), r);
    for (std::size_t j = 0; j < r; ++j) {
        const std::size_t src = order[j];
        sigma[j] = norms[src];
        for (std::size_t i = 0; i < k; ++i) small(i, j) = all(i, src);
    }
    const double sigma_max = sigma.front();
    for (std::size_t j = 0; j < r; ++j) {
        if (sigma[j] <= kSingularCutoff * sigma_max) {
            sigma[j] = 0.0;
            continue;
        }
        const std::size_t src = order[j];
        for (std::size_t i = 0; i < large.rows(); ++i) large(i, j) = mapped_all(i, src) / sigma[j];
    }
    orthonormalize_columns(large, r);

    if (tall) {
        return TruncatedSvd{std::move(large), std::move(sigma), std::move(small)};
    }
    return TruncatedSvd{std::move(small), std::move(sigma), std::move(large)};
}

Matrix solve_sylvester_sym(const Matrix& a, const Matrix& b, const Matrix& c) {
    require_square(a, "solve_sylvester_sym (a)");
    require_square(b, "solve_sylvester_sym (b)");
    if (c.rows() != a.rows() || c.cols() != b.rows()) {
        std::ostringstream os;
        os << "solve_sylvester_sym: rhs " << c.rows() << "x" << c.cols() << " incompatible with a "
           << a.rows() << "x" << a.rows() << " and b " << b.rows() << "x" << b.rows();
        throw DimensionError(os.str());
    }
    const SymEigen ea = sym_eigen(a);
    const SymEigen eb = sym_eigen(b);

    Matrix t = matmul(matmul_tn(ea.vectors, c), eb.vectors);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            const double denom = ea.values[i] + eb.values[j];
            if (!(denom >= kSylvesterMinDenominator)) {
                std::ostringstream os;
                os << "solve_sylvester_sym: eigenvalue sum " << denom << " below " << kSylvesterMinDenominator;
                throw SingularSystemError(os.str());
            }
            t(i, j) /= denom;
        }
    }
    return matmul_nt(matmul(ea.vectors, t), eb.vectors);
}

SpdInverse spd_inverse(const Matrix& a) {
    const SymEigen e = sym_eigen(a);
    const double lambda_max = e.values.empty() ? 0.0 : e.values.back();
    const double floor = lambda_max > 0.0 ? kSpdFloor * lambda_max : kSpdFloor;

    SpdInverse out;
    Matrix scaled = e.vectors;
    for (std::size_t j = 0; j < e.values.size(); ++j) {
        double lambda = e.values[j];
        if (lambda < floor) {
            lambda = floor;
            ++out.floored;
        }
        for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) /= lambda;
    }
    out.inverse = symmetrized(matmul_nt(scaled, e.vectors));
    return out;
}

}  // namespace grdmf
