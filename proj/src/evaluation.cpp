#include "grdmf/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "grdmf/metrics.hpp"

namespace grdmf {

namespace {

// Shuffles 0..count-1 and cuts the permutation into `folds` contiguous groups,
// the first count % folds of them one element longer.
std::vector<std::vector<std::size_t>> partition(std::size_t count, std::size_t folds, std::uint64_t seed) {
    std::vector<std::size_t> perm(count);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::vector<std::size_t>> groups(folds);
    const std::size_t base = count / folds;
    const std::size_t extra = count % folds;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        groups[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                         perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
        std::sort(groups[f].begin(), groups[f].end());
        pos += len;
    }
    return groups;
}

std::vector<SimilarityMatrix> matrices(const std::vector<NamedSimilarity>& side) {
    std::vector<SimilarityMatrix> out;
    out.reserve(side.size());
    for (const auto& s : side) out.push_back(s.similarity);
    return out;
}

struct Graphs {
    LaplacianMatrix l_d;
    LaplacianMatrix l_v;
};

Graphs build_graphs(const AssociationDataset& dataset, const SimilaritySet& similarities, const HyperParams& hp) {
    dataset.validate();
    similarities.validate_against(dataset);
    return Graphs{graph_laplacian(matrices(similarities.drug), hp.p),
                  graph_laplacian(matrices(similarities.virus), hp.p)};
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_scores_shape(const Matrix& scores, const Matrix& y) {
    if (scores.rows() != y.rows() || scores.cols() != y.cols()) {
        throw DimensionError("scorer returned a matrix of the wrong shape");
    }
}

}  // namespace

const char* to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::entries: return "entries";
        case Scheme::viruses: return "viruses";
        case Scheme::drugs: return "drugs";
    }
    return "entries";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "entries" || name == "cv1") return Scheme::entries;
    if (name == "viruses" || name == "cv2") return Scheme::viruses;
    if (name == "drugs" || name == "cv3") return Scheme::drugs;
    throw ConfigError("unknown CV scheme '" + name + "'");
}

std::vector<FoldSplit> split_entries(std::size_t rows, std::size_t cols, double fraction, std::size_t folds,
                                     std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ParameterError("split_entries: fraction must lie in (0, 1)");
    }
    if (folds < 2) throw ParameterError("split_entries: at least two folds are required");
    if (static_cast<std::size_t>(std::llround(1.0 / fraction)) != folds) {
        std::ostringstream os;
        os << "split_entries: fraction " << fraction << " implies " << std::llround(1.0 / fraction)
           << " folds, got " << folds;
        throw ParameterError(os.str());
    }
    if (rows * cols < folds) throw ParameterError("split_entries: more folds than cells");

    const auto groups = partition(rows * cols, folds, seed);
    std::vector<FoldSplit> out(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        out[f].fold_id = f;
        out[f].hidden_cells.reserve(groups[f].size());
        for (std::size_t flat : groups[f]) out[f].hidden_cells.push_back(Cell{flat / cols, flat % cols});
    }
    return out;
}

std::vector<FoldSplit> split_axis(std::size_t rows, std::size_t cols, Axis axis, std::size_t folds,
                                  std::uint64_t seed) {
    const std::size_t length = axis == Axis::rows ? rows : cols;
    if (folds < 1 || folds > length) {
        std::ostringstream os;
        os << "split_axis: " << folds << " folds for an axis of length " << length;
        throw ParameterError(os.str());
    }
    const auto groups = partition(length, folds, seed);
    std::vector<FoldSplit> out(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        out[f].fold_id = f;
        for (std::size_t index : groups[f]) {
            if (axis == Axis::rows) {
                for (std::size_t j = 0; j < cols; ++j) out[f].hidden_cells.push_back(Cell{index, j});
            } else {
                for (std::size_t i = 0; i < rows; ++i) out[f].hidden_cells.push_back(Cell{i, index});
            }
        }
        std::sort(out[f].hidden_cells.begin(), out[f].hidden_cells.end(), [](const Cell& a, const Cell& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
    }
    return out;
}

std::vector<std::uint64_t> repetition_seeds(std::uint64_t base, std::size_t repetitions) {
    std::mt19937_64 rng(base);
    std::vector<std::uint64_t> out(repetitions);
    for (auto& s : out) s = rng();
    return out;
}

Matrix grdmf_scorer(const FoldProblem& problem) {
    return fit(problem.y_train, problem.mask, problem.l_d, problem.l_v, problem.hp).x;
}

EvalReport run_cv(const AssociationDataset& dataset, const SimilaritySet& similarities, Scheme scheme,
                  const HyperParams& hp, std::uint64_t seed, const EvalOptions& options) {
    hp.validate();
    if (options.repetitions < 1) throw ParameterError("run_cv: at least one repetition is required");
    const Graphs graphs = build_graphs(dataset, similarities, hp);
    const Matrix& y = dataset.y;

    EvalReport report;
    report.scheme = to_string(scheme);
    report.seed = seed;
    report.seeds = repetition_seeds(seed, options.repetitions);

    std::vector<std::optional<double>> aucs;
    std::vector<std::optional<double>> auprs;
    for (std::size_t rep = 0; rep < report.seeds.size(); ++rep) {
        const std::uint64_t rep_seed = report.seeds[rep];
        std::vector<FoldSplit> splits;
        switch (scheme) {
            case Scheme::entries:
                splits = split_entries(y.rows(), y.cols(), 1.0 / static_cast<double>(options.folds), options.folds,
                                       rep_seed);
                break;
            case Scheme::viruses: splits = split_axis(y.rows(), y.cols(), Axis::cols, options.folds, rep_seed); break;
            case Scheme::drugs: splits = split_axis(y.rows(), y.cols(), Axis::rows, options.folds, rep_seed); break;
        }

        for (const FoldSplit& split : splits) {
            Matrix mask(y.rows(), y.cols(), 1.0);
            Matrix y_train = y;
            for (const Cell& c : split.hidden_cells) {
                mask(c.row, c.col) = 0.0;
                y_train(c.row, c.col) = 0.0;
            }
            const auto t0 = std::chrono::steady_clock::now();
            const Matrix scores = options.scorer(FoldProblem{y_train, mask, graphs.l_d, graphs.l_v, hp});
            require_scores_shape(scores, y);

            FoldRecord record;
            record.fit_seconds = seconds_since(t0);
            record.repetition = rep;
            record.seed = rep_seed;
            record.fold_id = split.fold_id;
            record.hidden = split.hidden_cells.size();

            std::vector<double> s;
            std::vector<int> labels;
            s.reserve(split.hidden_cells.size());
            labels.reserve(split.hidden_cells.size());
            for (const Cell& c : split.hidden_cells) {
                s.push_back(scores(c.row, c.col));
                labels.push_back(y(c.row, c.col) == 1.0 ? 1 : 0);
            }
            record.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
            if (record.positives == 0 || record.positives == labels.size()) {
                record.skipped = true;
                std::ostringstream os;
                os << "repetition " << rep << " fold " << split.fold_id
                   << ": hidden labels are single-class; fold excluded from the means";
                report.warnings.push_back(os.str());
            } else {
                record.auc = auc(s, labels);
                record.aupr = aupr(s, labels);
            }
            aucs.push_back(record.auc);
            auprs.push_back(record.aupr);
            report.per_fold.push_back(record);
        }
    }
    report.auc = mean_of(aucs);
    report.aupr = mean_of(auprs);
    return report;
}

EvalReport run_loocv(const AssociationDataset& dataset, const SimilaritySet& similarities, const HyperParams& hp,
                     const std::vector<std::size_t>& ks, const EvalOptions& options) {
    hp.validate();
    if (ks.empty()) throw ParameterError("run_loocv: no k values");
    if (std::find(ks.begin(), ks.end(), std::size_t{0}) != ks.end()) {
        throw ParameterError("run_loocv: k must be >= 1");
    }
    const Graphs graphs = build_graphs(dataset, similarities, hp);
    const Matrix& y = dataset.y;

    EvalReport report;
    report.scheme = "loo";

    std::vector<std::optional<double>> aucs;
    std::vector<std::optional<double>> auprs;
    std::map<std::size_t, std::vector<std::optional<double>>> pre;
    std::map<std::size_t, std::vector<std::optional<double>>> rec;
    for (std::size_t j = 0; j < y.cols(); ++j) {
        Matrix mask(y.rows(), y.cols(), 1.0);
        Matrix y_train = y;
        for (std::size_t i = 0; i < y.rows(); ++i) {
            mask(i, j) = 0.0;
            y_train(i, j) = 0.0;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const Matrix scores = options.scorer(FoldProblem{y_train, mask, graphs.l_d, graphs.l_v, hp});
        require_scores_shape(scores, y);

        VirusRecord record;
        record.fit_seconds = seconds_since(t0);
        record.virus = dataset.viruses[j];
        const std::vector<double> s = scores.column(j);
        std::vector<int> labels(y.rows());
        for (std::size_t i = 0; i < y.rows(); ++i) labels[i] = y(i, j) == 1.0 ? 1 : 0;
        record.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));

        if (record.positives == 0) {
            report.warnings.push_back("virus '" + record.virus +
                                      "' has no known positives; excluded from recall means");
        }
        if (record.positives > 0 && record.positives < labels.size()) {
            record.auc = auc(s, labels);
            record.aupr = aupr(s, labels);
        }
        for (std::size_t k : ks) {
            const TopK t = topk_metrics(s, labels, k, &report.warnings);
            record.pre_at_k[k] = t.precision;
            pre[k].push_back(t.precision);
            if (t.recall) record.rec_at_k[k] = *t.recall;
            rec[k].push_back(t.recall);
        }
        aucs.push_back(record.auc);
        auprs.push_back(record.aupr);
        report.per_virus.push_back(std::move(record));
    }
    report.auc = mean_of(aucs);
    report.aupr = mean_of(auprs);
    for (const auto& [k, values] : pre) {
        if (auto m = mean_of(values)) report.pre_at_k[k] = *m;
    }
    for (const auto& [k, values] : rec) {
        if (auto m = mean_of(values)) report.rec_at_k[k] = *m;
    }
    return report;
}

std::string SimilarityCombo::label() const {
    auto join = [](const std::vector<std::string>& names) {
        std::string out;
        for (std::size_t k = 0; k < names.size(); ++k) out += (k ? "+" : "") + names[k];
        return out;
    };
    return join(drug) + "|" + join(virus);
}

std::vector<AblationEntry> run_ablation(const AssociationDataset& dataset, const SimilaritySet& similarities,
                                        const std::vector<SimilarityCombo>& combos, const HyperParams& hp,
                                        std::uint64_t seed, const EvalOptions& options) {
    // Resolve every combination before any fit runs.
    std::vector<SimilaritySet> selected;
    selected.reserve(combos.size());
    for (const auto& combo : combos) selected.push_back(similarities.select(combo.drug, combo.virus));

    std::vector<AblationEntry> out;
    out.reserve(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
        out.push_back(AblationEntry{combos[c], run_cv(dataset, selected[c], Scheme::entries, hp, seed, options)});
    }
    return out;
}

}  // namespace grdmf
