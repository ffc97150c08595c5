#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "grdmf/dataset.hpp"
#include "grdmf/evaluation.hpp"
#include "grdmf/run_config.hpp"
#include "grdmf/solver.hpp"

namespace grdmf {

struct LoadedInputs {
    AssociationDataset dataset;
    SimilaritySet similarities;
    Warnings warnings;
};

/// Parses every input of the config before any computation. Similarities are
/// reordered to the association registries; profiles become cosine similarities.
LoadedInputs load_inputs(const RunConfig& config);

struct RecommendationEntry {
    std::size_t rank = 0;
    std::string drug;
    double score = 0.0;
    /// Already a positive in the training matrix.
    bool known = false;
};

struct RecommendationList {
    std::string virus;
    std::vector<RecommendationEntry> entries;
};

/// Ranks every drug for one virus column of the completed matrix, descending
/// score with ties in registry order. Known positives stay in the list.
RecommendationList predict_topk(const Matrix& completed, const AssociationDataset& training,
                                const std::string& virus, std::size_t k, Warnings* warnings = nullptr);

std::string format_recommendations_csv(const std::vector<RecommendationList>& lists);

/// {config, scheme, seeds, folds, mean: {auc, aupr, pre_at_k, rec_at_k}, warnings}.
nlohmann::json report_to_json(const EvalReport& report, const nlohmann::json& config);

nlohmann::json ablation_to_json(const std::vector<AblationEntry>& entries, const nlohmann::json& config);

/// Subcommand bodies. Each writes its outputs under config.output_dir and
/// returns the paths written; warnings are appended to `warnings`.
std::vector<std::string> command_fit(const RunConfig& config, Warnings& warnings);
std::vector<std::string> command_predict(const RunConfig& config, Warnings& warnings);
std::vector<std::string> command_cv(const RunConfig& config, Warnings& warnings);
std::vector<std::string> command_ablation(const RunConfig& config, Warnings& warnings);

}  // namespace grdmf
