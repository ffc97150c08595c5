#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "grdmf/error.hpp"

namespace grdmf {

/// Mann–Whitney AUC: probability that a random positive outscores a random
/// negative, ties counted ½. Throws UndefinedMetricError for single-class input.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Average precision over positives in descending-score order, ties kept in
/// input order. Throws UndefinedMetricError when there is no positive.
double aupr(std::span<const double> scores, std::span<const int> labels);

struct TopK {
    double precision = 0.0;
    /// Absent when there are no positives.
    std::optional<double> recall;
    std::size_t k = 0;
};

/// Precision and recall among the k highest scores (ties by input order).
/// k beyond the list length is clamped with a warning.
TopK topk_metrics(std::span<const double> scores, std::span<const int> labels, std::size_t k,
                  Warnings* warnings = nullptr);

}  // namespace grdmf
