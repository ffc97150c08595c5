#include "grdmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace grdmf {

void FeatureProfile::validate() const {
    if (indicator.rows() != entities.size() || indicator.cols() != features.size()) {
        std::ostringstream os;
        os << "profile indicator is " << indicator.rows() << "x" << indicator.cols() << " but has "
           << entities.size() << " entities and " << features.size() << " features";
        throw DimensionError(os.str());
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : entities) {
        if (!seen.insert(name).second) {
            throw RegistryError("duplicate entity name '" + name + "' in profile");
        }
    }
    for (std::size_t i = 0; i < indicator.rows(); ++i)
        for (std::size_t j = 0; j < indicator.cols(); ++j) {
            const double x = indicator(i, j);
            if (x != 0.0 && x != 1.0) {
                std::ostringstream os;
                os << "profile indicator entry (" << i << ", " << j << ") = " << x << " is not binary";
                throw ParameterError(os.str());
            }
        }
}

SimilarityMatrix cosine_similarity(const FeatureProfile& profile, Warnings* warnings) {
    profile.validate();
    const Matrix& x = profile.indicator;
    const std::size_t n = x.rows();

    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : x.row(i)) s += v * v;
        norms[i] = std::sqrt(s);
        if (norms[i] == 0.0) {
            warn(warnings, "entity '" + profile.entities[i] + "' has an all-zero profile; similar only to itself");
        }
    }

    const Matrix gram = matmul_nt(x, x);
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = 0.0;
            if (norms[i] > 0.0 && norms[j] > 0.0) {
                v = std::clamp(gram(i, j) / (norms[i] * norms[j]), 0.0, 1.0);
            }
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return SimilarityMatrix{profile.entities, std::move(s)};
}

SimilarityMatrix ingest_similarity(SimilarityMatrix raw, Warnings* warnings) {
    require_square(raw.values, "similarity");
    if (raw.entities.size() != raw.values.rows()) {
        throw DimensionError("similarity name list does not match matrix size");
    }
    const double skew = asymmetry(raw.values);
    if (skew > 1e-9) {
        std::ostringstream os;
        os << "similarity asymmetric (‖S − Sᵀ‖_F = " << skew << "); replaced by (S + Sᵀ)/2";
        warn(warnings, os.str());
    }
    raw.values = symmetrized(raw.values);
    return raw;
}

SimilarityMatrix sparsify_pnn(const SimilarityMatrix& s, std::size_t p) {
    require_square(s.values, "sparsify_pnn");
    const std::size_t n = s.values.rows();
    if (p < 1 || p >= n) {
        std::ostringstream os;
        os << "sparsify_pnn: p = " << p << " outside [1, " << (n == 0 ? 0 : n - 1) << "]";
        throw ParameterError(os.str());
    }

    std::vector<char> selected(n * n, 0);
    std::vector<std::size_t> candidates;
    candidates.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        candidates.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) candidates.push_back(j);
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](std::size_t a, std::size_t b) { return s.values(i, a) > s.values(i, b); });
        for (std::size_t r = 0; r < p; ++r) selected[i * n + candidates[r]] = 1;
    }

    SimilarityMatrix out{s.entities, Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values(i, i) = s.values(i, i);
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && (selected[i * n + j] || selected[j * n + i])) {
                out.values(i, j) = s.values(i, j);
            }
        }
    }
    return out;
}

LaplacianMatrix laplacian(const SimilarityMatrix& s) {
    require_square(s.values, "laplacian");
    const double skew = asymmetry(s.values);
    if (skew > 1e-12 * (1.0 + frobenius_norm(s.values))) {
        std::ostringstream os;
        os << "laplacian: similarity not symmetric (‖S − Sᵀ‖_F = " << skew << ")";
        throw SymmetryError(os.str());
    }
    const std::size_t n = s.values.rows();
    Matrix l = -1.0 * s.values;
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (double v : s.values.row(i)) degree += v;
        l(i, i) += degree;
    }
    return LaplacianMatrix{std::move(l)};
}

LaplacianMatrix combine_laplacians(std::span<const LaplacianMatrix> parts) {
    if (parts.empty()) {
        throw ParameterError("combine_laplacians: no parts");
    }
    Matrix sum = parts.front().values;
    for (std::size_t k = 1; k < parts.size(); ++k) {
        require_same_shape(sum, parts[k].values, "combine_laplacians");
        sum += parts[k].values;
    }
    return LaplacianMatrix{std::move(sum)};
}

LaplacianMatrix graph_laplacian(std::span<const SimilarityMatrix> similarities, std::size_t p) {
    std::vector<LaplacianMatrix> parts;
    parts.reserve(similarities.size());
    for (const auto& s : similarities) {
        parts.push_back(laplacian(sparsify_pnn(s, p)));
    }
    return combine_laplacians(parts);
}

}  // namespace grdmf
