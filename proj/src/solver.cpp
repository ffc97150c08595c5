#include "grdmf/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>

#include "grdmf/linalg.hpp"

namespace grdmf {

namespace {

void require_mask(const Matrix& y, const Matrix& mask) {
    require_same_shape(y, mask, "mask");
    for (double v : mask.data()) {
        if (v != 0.0 && v != 1.0) throw ParameterError("mask entries must be 0 or 1");
    }
}

void require_laplacians(const Matrix& y, const LaplacianMatrix& l_d, const LaplacianMatrix& l_v) {
    if (l_d.values.rows() != y.rows() || !l_d.values.square()) {
        throw DimensionError("drug Laplacian does not match the row count of Y");
    }
    if (l_v.values.rows() != y.cols() || !l_v.values.square()) {
        throw DimensionError("virus Laplacian does not match the column count of Y");
    }
}

// Σ_ij a_ij b_ij.
double inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "inner product");
    double s = 0.0;
    auto ad = a.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < ad.size(); ++k) s += ad[k] * bd[k];
    return s;
}

Matrix shifted_laplacian(const LaplacianMatrix& l, double mu) {
    Matrix a = (2.0 * mu) * l.values;
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += HyperParams::sigma;
    return symmetrized(a);
}

}  // namespace

void HyperParams::validate() const {
    std::ostringstream os;
    if (!(alpha > 0.0 && alpha < 2.0)) os << "alpha must lie in (0, 2), got " << alpha;
    else if (!(theta > 0.0) || !std::isfinite(theta)) os << "theta must be positive, got " << theta;
    else if (!(mu >= 0.0) || !std::isfinite(mu)) os << "mu must be nonnegative, got " << mu;
    else if (dims.size() < 2) os << "at least two latent dimensions are required";
    else if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; })) os << "latent dimensions must be >= 1";
    else if (iters < 1) os << "iteration count must be >= 1";
    else if (p < 1) os << "neighbour count p must be >= 1";
    const std::string msg = os.str();
    if (!msg.empty()) throw ParameterError(msg);
}

const Matrix& FactorSet::at(std::size_t index) const {
    if (index == 0) return u1;
    if (index <= middles.size()) return middles[index - 1];
    if (index == middles.size() + 1) return v;
    throw DimensionError("factor index out of range");
}

Matrix& FactorSet::at(std::size_t index) {
    return const_cast<Matrix&>(std::as_const(*this).at(index));
}

Matrix FactorSet::partial_product(std::size_t first, std::size_t last) const {
    if (first >= last || last > count()) {
        throw DimensionError("empty or out-of-range factor product");
    }
    Matrix out = at(first);
    for (std::size_t k = first + 1; k < last; ++k) out = matmul(out, at(k));
    return out;
}

void FactorSet::validate() const {
    for (std::size_t k = 0; k + 1 < count(); ++k) {
        if (at(k).cols() != at(k + 1).rows()) {
            std::ostringstream os;
            os << "factor " << k << " (" << at(k).rows() << "x" << at(k).cols() << ") does not chain with factor "
               << k + 1 << " (" << at(k + 1).rows() << "x" << at(k + 1).cols() << ")";
            throw DimensionError(os.str());
        }
    }
}

FitError::FitError(std::size_t iteration, const std::string& what)
    : Error("iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration) {}

double objective(const Matrix& x, const FactorSet& factors, const Matrix& y, const Matrix& mask,
                 const LaplacianMatrix& l_d, const LaplacianMatrix& l_v, double mu, double theta) {
    require_same_shape(x, y, "objective (x vs y)");
    require_mask(y, mask);
    require_laplacians(y, l_d, l_v);
    factors.validate();
    const Matrix product = factors.product();
    require_same_shape(x, product, "objective (x vs factor product)");

    const double data = frobenius_norm_sq(y - hadamard(mask, x));
    const double coupling = theta * frobenius_norm_sq(x - product);
    const double drug_reg = inner(factors.u1, matmul(l_d.values, factors.u1));
    const double virus_reg = inner(factors.v, matmul(factors.v, l_v.values));
    return data + coupling + 2.0 * mu * drug_reg + 2.0 * mu * virus_reg;
}

FactorSet init_factors(const Matrix& y, std::span<const std::size_t> dims) {
    const std::size_t m = y.rows();
    const std::size_t n = y.cols();
    if (dims.size() < 2) throw ParameterError("init_factors: at least two latent dimensions are required");
    for (std::size_t d : dims) {
        if (d < 1 || d > std::min(m, n)) {
            std::ostringstream os;
            os << "init_factors: latent dimension " << d << " outside [1, " << std::min(m, n) << "]";
            throw ParameterError(os.str());
        }
    }

    std::vector<Matrix> chain;
    Matrix remainder = y;
    for (std::size_t d : dims) {
        // Increasing dims leave fewer than d singular triplets; the factor is
        // zero-padded so the product is unchanged.
        const std::size_t r = std::min({d, remainder.rows(), remainder.cols()});
        const TruncatedSvd svd = truncated_svd(remainder, r);
        Matrix factor(remainder.rows(), d);
        Matrix next(d, remainder.cols());
        for (std::size_t j = 0; j < r; ++j) {
            const double root = std::sqrt(svd.singular[j]);
            for (std::size_t i = 0; i < factor.rows(); ++i) factor(i, j) = svd.left(i, j) * root;
            for (std::size_t i = 0; i < next.cols(); ++i) next(j, i) = svd.right(i, j) * root;
        }
        chain.push_back(std::move(factor));
        remainder = std::move(next);
    }

    FactorSet out;
    out.u1 = std::move(chain.front());
    out.middles.assign(std::make_move_iterator(chain.begin() + 1), std::make_move_iterator(chain.end()));
    out.v = std::move(remainder);
    return out;
}

Matrix update_x(const Matrix& x, const Matrix& product, const Matrix& y, const Matrix& mask, double alpha,
                double theta) {
    require_same_shape(x, y, "update_x (x vs y)");
    require_same_shape(x, product, "update_x (x vs product)");
    require_same_shape(x, mask, "update_x (x vs mask)");
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("update_x: alpha must lie in (0, 2)");

    constexpr double s = HyperParams::sigma;
    Matrix out(x.rows(), x.cols());
    auto od = out.data();
    auto xd = x.data();
    auto pd = product.data();
    auto yd = y.data();
    auto md = mask.data();
    for (std::size_t k = 0; k < od.size(); ++k) {
        const double b = xd[k] + alpha * (md[k] * (yd[k] - md[k] * xd[k]));
        od[k] = std::max((s * b + theta * pd[k]) / (s + theta), 0.0);
    }
    return out;
}

Matrix update_u1(const Matrix& x, const Matrix& u1_prev, const Matrix& tail, const LaplacianMatrix& l_d, double mu,
                 double theta) {
    const Matrix a = shifted_laplacian(l_d, mu);
    const Matrix b = symmetrized(theta * matmul_nt(tail, tail));
    const Matrix c = theta * matmul_nt(x, tail) + HyperParams::sigma * u1_prev;
    return solve_sylvester_sym(a, b, c);
}

MiddleUpdate update_middle(const Matrix& x, const Matrix& factor_prev, const Matrix& left, const Matrix& right,
                           double theta) {
    SpdInverse g = spd_inverse(symmetrized(matmul_tn(left, left)));
    const Matrix b = symmetrized(theta * matmul_nt(right, right));
    const Matrix projected = matmul_nt(matmul_tn(left, x), right);
    const Matrix c = matmul(g.inverse, theta * projected + HyperParams::sigma * factor_prev);
    return MiddleUpdate{solve_sylvester_sym(g.inverse, b, c), g.floored};
}

Matrix update_v(const Matrix& x, const Matrix& v_prev, const Matrix& head, const LaplacianMatrix& l_v, double mu,
                double theta) {
    const Matrix a = symmetrized(theta * matmul_tn(head, head));
    const Matrix b = shifted_laplacian(l_v, mu);
    const Matrix c = theta * matmul_tn(head, x) + HyperParams::sigma * v_prev;
    return solve_sylvester_sym(a, b, c);
}

FitResult fit(const Matrix& y, const Matrix& mask, const LaplacianMatrix& l_d, const LaplacianMatrix& l_v,
              const HyperParams& hp, const BlockObserver& observer) {
    hp.validate();
    return fit_from(y, mask, l_d, l_v, hp, init_factors(y, hp.dims), observer);
}

FitResult fit_from(const Matrix& y, const Matrix& mask, const LaplacianMatrix& l_d, const LaplacianMatrix& l_v,
                   const HyperParams& hp, FactorSet start, const BlockObserver& observer) {
    hp.validate();
    require_mask(y, mask);
    require_laplacians(y, l_d, l_v);
    start.validate();
    if (start.u1.rows() != y.rows() || start.v.cols() != y.cols()) {
        throw DimensionError("fit_from: factor product does not match the shape of Y");
    }

    const auto t0 = std::chrono::steady_clock::now();
    FitResult result{y, std::move(start), {}};
    Matrix& x = result.x;
    FactorSet& f = result.factors;
    SolveTrace& trace = result.trace;

    auto loss = [&] { return objective(x, f, y, mask, l_d, l_v, hp.mu, hp.theta); };
    trace.loss.reserve(hp.iters + 1);
    trace.loss.push_back(loss());

    std::size_t iteration = 0;
    // Replaces the current value of a block, reporting the change to the observer.
    auto commit = [&](Matrix& slot, Matrix updated, const std::string& name) {
        if (!observer) {
            slot = std::move(updated);
            return;
        }
        BlockEvent event;
        event.iteration = iteration;
        event.block = name;
        event.loss_before = loss();
        event.step_sq = frobenius_norm_sq(updated - slot);
        slot = std::move(updated);
        event.loss_after = loss();
        observer(event);
    };

    const std::size_t last = f.count() - 1;
    for (iteration = 1; iteration <= hp.iters; ++iteration) {
        try {
            commit(x, update_x(x, f.product(), y, mask, hp.alpha, hp.theta), "x");
            commit(f.u1, update_u1(x, f.u1, f.partial_product(1, f.count()), l_d, hp.mu, hp.theta), "u1");
            for (std::size_t k = 1; k < last; ++k) {
                MiddleUpdate mid =
                    update_middle(x, f.at(k), f.partial_product(0, k), f.partial_product(k + 1, f.count()), hp.theta);
                trace.floor_events += mid.floored;
                commit(f.at(k), std::move(mid.factor), "u" + std::to_string(k + 1));
            }
            commit(f.v, update_v(x, f.v, f.partial_product(0, last), l_v, hp.mu, hp.theta), "v");
            trace.loss.push_back(loss());
        } catch (const Error& e) {
            std::throw_with_nested(FitError(iteration, e.what()));
        }
    }

    trace.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace grdmf
