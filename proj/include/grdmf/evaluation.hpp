#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grdmf/dataset.hpp"
#include "grdmf/error.hpp"
#include "grdmf/graph.hpp"
#include "grdmf/solver.hpp"

namespace grdmf {

/// entries = CV1 (random cells), viruses = CV2 (whole columns), drugs = CV3 (whole rows).
enum class Scheme { entries, viruses, drugs };
enum class Axis { rows, cols };

const char* to_string(Scheme scheme) noexcept;
Scheme parse_scheme(const std::string& name);

struct Cell {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct FoldSplit {
    std::size_t fold_id = 0;
    std::vector<Cell> hidden_cells;
};

/// Randomly partitions all rows·cols cells into `folds` groups whose sizes
/// differ by at most one. `folds` must equal round(1 / fraction).
std::vector<FoldSplit> split_entries(std::size_t rows, std::size_t cols, double fraction, std::size_t folds,
                                     std::uint64_t seed);

/// Partitions the indices of one axis into `folds` near-equal groups; each
/// fold hides every cell of its rows (Axis::rows) or columns (Axis::cols).
std::vector<FoldSplit> split_axis(std::size_t rows, std::size_t cols, Axis axis, std::size_t folds,
                                  std::uint64_t seed);

/// Seeds of the repeated CV runs, derived from the base seed.
std::vector<std::uint64_t> repetition_seeds(std::uint64_t base, std::size_t repetitions);

/// What a scorer sees for one fold: the training copy of Y (hidden cells
/// zeroed), the observation mask, and the combined Laplacians.
struct FoldProblem {
    const Matrix& y_train;
    const Matrix& mask;
    const LaplacianMatrix& l_d;
    const LaplacianMatrix& l_v;
    const HyperParams& hp;
};

/// Produces a score matrix for a fold. The default runs the GRDMF fit.
using Scorer = std::function<Matrix(const FoldProblem&)>;

Matrix grdmf_scorer(const FoldProblem& problem);

struct EvalOptions {
    std::size_t folds = 10;
    std::size_t repetitions = 1;
    Scorer scorer = grdmf_scorer;
};

struct FoldRecord {
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    std::size_t fold_id = 0;
    std::size_t hidden = 0;
    std::size_t positives = 0;
    std::optional<double> auc;
    std::optional<double> aupr;
    bool skipped = false;
    double fit_seconds = 0.0;
};

struct VirusRecord {
    std::string virus;
    std::size_t positives = 0;
    std::optional<double> auc;
    std::optional<double> aupr;
    std::map<std::size_t, double> pre_at_k;
    std::map<std::size_t, double> rec_at_k;
    double fit_seconds = 0.0;
};

struct EvalReport {
    /// "entries", "viruses", "drugs" or "loo".
    std::string scheme;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;
    std::optional<double> auc;
    std::optional<double> aupr;
    std::vector<FoldRecord> per_fold;
    std::vector<VirusRecord> per_virus;
    std::map<std::size_t, double> pre_at_k;
    std::map<std::size_t, double> rec_at_k;
    Warnings warnings;
};

/// Hidden-cell cross validation. Every fold zeroes its cells in both the mask
/// and the training copy of Y, scores them, and records AUC/AUPR against the
/// true labels. Folds whose hidden labels are single-class are skipped.
EvalReport run_cv(const AssociationDataset& dataset, const SimilaritySet& similarities, Scheme scheme,
                  const HyperParams& hp, std::uint64_t seed, const EvalOptions& options = {});

/// Leave-one-virus-out: hides each virus column in turn and ranks all drugs
/// for it. Viruses without known positives are left out of the recall means.
EvalReport run_loocv(const AssociationDataset& dataset, const SimilaritySet& similarities, const HyperParams& hp,
                     const std::vector<std::size_t>& ks, const EvalOptions& options = {});

struct SimilarityCombo {
    std::vector<std::string> drug;
    std::vector<std::string> virus;

    /// e.g. "s1_d+s2_d|s1_v".
    std::string label() const;
};

struct AblationEntry {
    SimilarityCombo combo;
    EvalReport report;
};

/// run_cv(Scheme::entries) once per similarity combination, same seed for all.
std::vector<AblationEntry> run_ablation(const AssociationDataset& dataset, const SimilaritySet& similarities,
                                        const std::vector<SimilarityCombo>& combos, const HyperParams& hp,
                                        std::uint64_t seed, const EvalOptions& options = {});

}  // namespace grdmf
