#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "grdmf/evaluation.hpp"
#include "grdmf/solver.hpp"

namespace grdmf {

/// A similarity input: an explicit matrix file, or a binary profile whose
/// cosine similarity is taken.
struct SimilaritySource {
    std::string name;
    std::filesystem::path path;
    bool is_profile = false;
};

struct RunConfig {
    std::filesystem::path association;
    std::vector<SimilaritySource> drug_sources;
    std::vector<SimilaritySource> virus_sources;

    /// "entries", "viruses", "drugs" or "loo".
    std::string scheme = "entries";
    std::size_t layers = 2;
    HyperParams hp;
    std::vector<std::size_t> ks{3, 5, 7};
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    std::size_t repetitions = 10;

    /// predict: virus names and list length.
    std::vector<std::string> viruses;
    std::size_t top = 10;

    /// ablation: combinations such as "s1_d+s2_d|s1_v".
    std::vector<SimilarityCombo> combos;

    std::filesystem::path output_dir = ".";

    /// Throws ConfigError unless each side has a source and every file exists.
    void validate() const;
};

/// Tuned hyperparameters per CV scheme and depth (2 or 3 layers). "loo" uses
/// the column-hiding values; "fit" and "predict" use the random-cell values.
HyperParams default_hyperparams(const std::string& scheme, std::size_t layers);

/// Parses "s1_d+s2_d|s1_v+s2_v".
SimilarityCombo parse_combo(const std::string& text);

/// Every drug-side subset crossed with every virus-side subset, smallest first.
std::vector<SimilarityCombo> all_combos(const std::vector<std::string>& drug_names,
                                        const std::vector<std::string>& virus_names);

/// Applies the keys present in a JSON config object onto `config`. Relative
/// paths resolve against `base_dir`. Unknown keys raise ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Resolved configuration with SHA-256 digests of every input file. The
/// output directory is left out so identical runs serialize identically.
nlohmann::json describe_config(const RunConfig& config);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace grdmf
