#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "grdmf/error.hpp"
#include "grdmf/metrics.hpp"
#include "metric_oracles.hpp"

using namespace grdmf;
using namespace grdmf::testing;

TEST_CASE("auc worked examples") {
    CHECK(auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
    CHECK(auc(std::vector<double>{0.1, 0.9}, std::vector<int>{1, 0}) == 0.0);
    CHECK(auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}) == 0.5);
}

TEST_CASE("aupr worked examples") {
    CHECK(aupr(std::vector<double>{0.3}, std::vector<int>{1}) == 1.0);
    CHECK(aupr(std::vector<double>{0.9, 0.8, 0.1}, std::vector<int>{1, 0, 1}) == doctest::Approx(5.0 / 6.0));
    CHECK(aupr(std::vector<double>{0.9, 0.8, 0.1, 0.0}, std::vector<int>{1, 1, 0, 0}) == 1.0);
}

TEST_CASE("topk_metrics worked examples") {
    const TopK all = topk_metrics(std::vector<double>{0.1, 0.7, 0.3}, std::vector<int>{1, 1, 1}, 3);
    CHECK(all.precision == 1.0);
    CHECK(all.recall == 1.0);

    const TopK two = topk_metrics(std::vector<double>{0.9, 0.5, 0.1}, std::vector<int>{1, 0, 1}, 2);
    CHECK(two.precision == 0.5);
    CHECK(two.recall == 0.5);
    CHECK(two.k == 2);
}

TEST_CASE("topk_metrics clamps k with a warning and omits recall without positives") {
    Warnings w;
    const TopK t = topk_metrics(std::vector<double>{0.2, 0.4}, std::vector<int>{0, 1}, 5, &w);
    CHECK(t.k == 2);
    CHECK(t.precision == 0.5);
    CHECK(w.size() == 1);

    const TopK none = topk_metrics(std::vector<double>{0.2, 0.4}, std::vector<int>{0, 0}, 1);
    CHECK(none.precision == 0.0);
    CHECK_FALSE(none.recall.has_value());
}

TEST_CASE("metrics error paths") {
    CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), UndefinedMetricError);
    CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}), UndefinedMetricError);
    CHECK_THROWS_AS(aupr(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}), UndefinedMetricError);
    CHECK_THROWS_AS(auc(std::vector<double>{0.1}, std::vector<int>{1, 0}), DimensionError);
    CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 2}), ParameterError);
    CHECK_THROWS_AS(topk_metrics(std::vector<double>{0.1}, std::vector<int>{1}, 0), ParameterError);
    CHECK_THROWS_AS(aupr(std::vector<double>{NAN, 0.2}, std::vector<int>{1, 0}), ParameterError);
}

TEST_CASE("metrics match brute-force oracles on random vectors") {
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<std::size_t> length(2, 120);
    for (int trial = 0; trial < 200; ++trial) {
        const Sample s = random_sample(rng, length(rng));
        CHECK(std::abs(auc(s.scores, s.labels) - brute_auc(s)) <= 1e-12);
        CHECK(std::abs(aupr(s.scores, s.labels) - brute_ap(s)) <= 1e-12);
        for (std::size_t k : {std::size_t{1}, std::size_t{3}, s.scores.size()}) {
            const TopK t = topk_metrics(s.scores, s.labels, k);
            const auto [pre, rec] = brute_topk(s, std::min(k, s.scores.size()));
            CHECK(std::abs(t.precision - pre) <= 1e-12);
            REQUIRE(t.recall.has_value());
            CHECK(std::abs(*t.recall - rec) <= 1e-12);
        }
    }
}

TEST_CASE("metrics are invariant under positive rescaling of scores") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const Sample s = random_sample(rng, 40);
        std::vector<double> scaled = s.scores;
        for (double& v : scaled) v *= 8.0;  // a power of two keeps ties exact
        CHECK(auc(scaled, s.labels) == auc(s.scores, s.labels));
        CHECK(aupr(scaled, s.labels) == aupr(s.scores, s.labels));
        CHECK(topk_metrics(scaled, s.labels, 5).precision == topk_metrics(s.scores, s.labels, 5).precision);
        CHECK(topk_metrics(scaled, s.labels, 5).recall == topk_metrics(s.scores, s.labels, 5).recall);
    }
}

TEST_CASE("metrics stay in [0, 1]") {
    std::mt19937_64 rng(102);
    for (int trial = 0; trial < 50; ++trial) {
        const Sample s = random_sample(rng, 30);
        for (double v : {auc(s.scores, s.labels), aupr(s.scores, s.labels)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}
