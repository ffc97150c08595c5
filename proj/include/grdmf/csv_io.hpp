#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grdmf/dataset.hpp"
#include "grdmf/error.hpp"
#include "grdmf/graph.hpp"
#include "grdmf/solver.hpp"

namespace grdmf {

/// A labelled table: header names, row names and a numeric body.
struct LabelledTable {
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
    Matrix body;
};

/// Parses CSV text whose first row holds column names and whose first column
/// holds row names (the top-left cell is ignored). Quoted fields, CRLF line
/// endings and a UTF-8 BOM are accepted. `source` names the input in errors.
LabelledTable parse_labelled_csv(const std::string& text, const std::string& source);
LabelledTable read_labelled_csv(const std::filesystem::path& path);

/// Drugs × viruses, binary body.
AssociationDataset load_association_csv(const std::filesystem::path& path);

/// Entities × features, binary body. All-zero rows load with a warning.
FeatureProfile load_profile_csv(const std::filesystem::path& path, Warnings* warnings = nullptr);

/// Square table with identical header and row names, real body.
SimilarityMatrix load_similarity_csv(const std::filesystem::path& path, Warnings* warnings = nullptr);

/// Reorders a similarity to follow `registry`. Throws RegistryError when a
/// registry name is missing; extra entities are dropped with a warning.
SimilarityMatrix align_similarity(const SimilarityMatrix& s, const std::vector<std::string>& registry,
                                  Warnings* warnings = nullptr);

/// Same alignment for profile rows.
FeatureProfile align_profile(const FeatureProfile& p, const std::vector<std::string>& registry,
                             Warnings* warnings = nullptr);

/// Shortest decimal text that reads back as exactly `v`.
std::string format_real(double v);
/// Quotes a CSV field when it holds a separator, quote, line break or
/// surrounding blanks.
std::string csv_field(const std::string& s);
/// Writes a labelled table with round-trip precision for real values.
std::string format_labelled_csv(const std::vector<std::string>& row_names, const std::vector<std::string>& col_names,
                                const Matrix& body, const std::string& corner = "");
void write_text(const std::filesystem::path& path, const std::string& text);

void write_association_csv(const std::filesystem::path& path, const AssociationDataset& dataset);

/// `iteration,loss` with iteration 0 the value after initialization.
std::string format_trace_csv(const SolveTrace& trace);

}  // namespace grdmf
