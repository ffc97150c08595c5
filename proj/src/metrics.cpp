#include "grdmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace grdmf {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw DimensionError("scores and labels differ in length");
    }
    for (int l : labels) {
        if (l != 0 && l != 1) throw ParameterError("labels must be 0 or 1");
    }
    for (double s : scores) {
        if (std::isnan(s)) throw ParameterError("NaN score");
    }
}

// Indices sorted by descending score; equal scores keep input order.
std::vector<std::size_t> ranking(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw UndefinedMetricError("AUC needs both positive and negative labels");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of 1-based midranks of the positives.
    double rank_sum = 0.0;
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start;
        while (end < n && scores[order[end]] == scores[order[start]]) ++end;
        const double midrank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t k = start; k < end; ++k)
            if (labels[order[k]] == 1) rank_sum += midrank;
        start = end;
    }
    const double p = static_cast<double>(positives);
    const double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

double aupr(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (positives == 0) {
        throw UndefinedMetricError("AUPR needs at least one positive label");
    }
    const auto order = ranking(scores);
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (labels[order[r]] == 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(r + 1);
        }
    }
    return sum / static_cast<double>(positives);
}

TopK topk_metrics(std::span<const double> scores, std::span<const int> labels, std::size_t k, Warnings* warnings) {
    check_inputs(scores, labels);
    if (k < 1) throw ParameterError("top-k needs k >= 1");
    if (scores.empty()) throw ParameterError("top-k of an empty list");
    if (k > scores.size()) {
        std::ostringstream os;
        os << "k = " << k << " exceeds list length " << scores.size() << "; clamped";
        warn(warnings, os.str());
        k = scores.size();
    }
    const auto order = ranking(scores);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r) hits += static_cast<std::size_t>(labels[order[r]]);
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));

    TopK out;
    out.k = k;
    out.precision = static_cast<double>(hits) / static_cast<double>(k);
    if (positives > 0) out.recall = static_cast<double>(hits) / static_cast<double>(positives);
    return out;
}

}  // namespace grdmf
