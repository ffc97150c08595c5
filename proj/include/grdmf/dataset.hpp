#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grdmf/graph.hpp"
#include "grdmf/matrix.hpp"

namespace grdmf {

/// Binary drug × virus association matrix with its name registries.
struct AssociationDataset {
    std::vector<std::string> drugs;
    std::vector<std::string> viruses;
    Matrix y;

    /// Throws on shape/name-count mismatch, duplicate names or non-binary entries.
    void validate() const;
    std::optional<std::size_t> drug_index(const std::string& name) const;
    std::optional<std::size_t> virus_index(const std::string& name) const;
};

struct NamedSimilarity {
    std::string name;
    SimilarityMatrix similarity;
};

/// Drug-side and virus-side similarity sources, each identified by name
/// (s1_d, s2_d, s1_v, s2_v by default).
struct SimilaritySet {
    std::vector<NamedSimilarity> drug;
    std::vector<NamedSimilarity> virus;

    /// Checks both sides are nonempty and sized (and, when names are present,
    /// ordered) like the dataset registries.
    void validate_against(const AssociationDataset& dataset) const;

    /// Subset by name. Throws ConfigError for unknown names or an empty side.
    SimilaritySet select(const std::vector<std::string>& drug_names,
                         const std::vector<std::string>& virus_names) const;
};

}  // namespace grdmf
