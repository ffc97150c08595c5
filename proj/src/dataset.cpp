#include "grdmf/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "grdmf/error.hpp"

namespace grdmf {

namespace {

void require_unique(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) {
            throw RegistryError(std::string("duplicate ") + what + " name '" + n + "'");
        }
    }
}

std::optional<std::size_t> find_name(const std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

void check_side(const std::vector<NamedSimilarity>& side, const std::vector<std::string>& registry,
                const char* what) {
    if (side.empty()) {
        throw ConfigError(std::string("no ") + what + " similarity source");
    }
    for (const auto& s : side) {
        const Matrix& v = s.similarity.values;
        if (!v.square() || v.rows() != registry.size()) {
            std::ostringstream os;
            os << what << " similarity '" << s.name << "' is " << v.rows() << "x" << v.cols() << ", expected "
               << registry.size() << "x" << registry.size();
            throw DimensionError(os.str());
        }
        if (!s.similarity.entities.empty() && s.similarity.entities != registry) {
            throw RegistryError(std::string(what) + " similarity '" + s.name +
                                "' entity order differs from the association registry");
        }
    }
}

}  // namespace

void AssociationDataset::validate() const {
    if (y.rows() != drugs.size() || y.cols() != viruses.size()) {
        std::ostringstream os;
        os << "association matrix is " << y.rows() << "x" << y.cols() << " but registries hold " << drugs.size()
           << " drugs and " << viruses.size() << " viruses";
        throw DimensionError(os.str());
    }
    require_unique(drugs, "drug");
    require_unique(viruses, "virus");
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j)
            if (y(i, j) != 0.0 && y(i, j) != 1.0) {
                std::ostringstream os;
                os << "association entry (" << drugs[i] << ", " << viruses[j] << ") = " << y(i, j)
                   << " is not binary";
                throw ParseError(os.str());
            }
}

std::optional<std::size_t> AssociationDataset::drug_index(const std::string& name) const {
    return find_name(drugs, name);
}

std::optional<std::size_t> AssociationDataset::virus_index(const std::string& name) const {
    return find_name(viruses, name);
}

void SimilaritySet::validate_against(const AssociationDataset& dataset) const {
    check_side(drug, dataset.drugs, "drug");
    check_side(virus, dataset.viruses, "virus");
}

SimilaritySet SimilaritySet::select(const std::vector<std::string>& drug_names,
                                    const std::vector<std::string>& virus_names) const {
    auto pick = [](const std::vector<NamedSimilarity>& side, const std::vector<std::string>& names,
                   const char* what) {
        if (names.empty()) {
            throw ConfigError(std::string("combination names no ") + what + " similarity");
        }
        std::vector<NamedSimilarity> out;
        for (const auto& n : names) {
            const auto it = std::find_if(side.begin(), side.end(), [&](const NamedSimilarity& s) { return s.name == n; });
            if (it == side.end()) {
                throw ConfigError(std::string("unknown ") + what + " similarity '" + n + "'");
            }
            out.push_back(*it);
        }
        return out;
    };
    return SimilaritySet{pick(drug, drug_names, "drug"), pick(virus, virus_names, "virus")};
}

}  // namespace grdmf
