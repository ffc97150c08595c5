#include <doctest.h>

#include <algorithm>
#include <set>

#include "grdmf/error.hpp"
#include "grdmf/evaluation.hpp"
#include "test_support.hpp"

using namespace grdmf;
using grdmf::testing::binary_mask;
using grdmf::testing::random_similarity;

namespace {

std::set<std::pair<std::size_t, std::size_t>> cells_of(const FoldSplit& f) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (const Cell& c : f.hidden_cells) out.emplace(c.row, c.col);
    return out;
}

// Checks disjointness and coverage of rows × cols; returns the fold sizes.
std::vector<std::size_t> check_partition(const std::vector<FoldSplit>& splits, std::size_t rows, std::size_t cols) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::size_t> sizes;
    for (const FoldSplit& f : splits) {
        const auto cells = cells_of(f);
        CHECK(cells.size() == f.hidden_cells.size());
        for (const auto& c : cells) {
            CHECK(c.first < rows);
            CHECK(c.second < cols);
            CHECK(seen.insert(c).second);
        }
        sizes.push_back(f.hidden_cells.size());
    }
    CHECK(seen.size() == rows * cols);
    return sizes;
}

AssociationDataset make_dataset(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    AssociationDataset d;
    d.y = binary_mask(rng, m, n, 0.3);
    for (std::size_t i = 0; i < m; ++i) d.drugs.push_back("drug" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) d.viruses.push_back("virus" + std::to_string(j));
    // Every column gets at least one positive and one negative.
    for (std::size_t j = 0; j < n; ++j) {
        d.y(j % m, j) = 1.0;
        d.y((j + 1) % m, j) = 0.0;
    }
    return d;
}

SimilaritySet make_similarities(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    return SimilaritySet{{{"s1_d", random_similarity(rng, m)}, {"s2_d", random_similarity(rng, m)}},
                         {{"s1_v", random_similarity(rng, n)}, {"s2_v", random_similarity(rng, n)}}};
}

HyperParams small_params() {
    HyperParams hp;
    hp.mu = 1.0;
    hp.theta = 1.0;
    hp.alpha = 0.5;
    hp.p = 3;
    hp.dims = {4, 3};
    hp.iters = 5;
    return hp;
}

// Scores every cell with its true label.
Scorer oracle(const Matrix& truth) {
    return [truth](const FoldProblem&) { return truth; };
}

}  // namespace

TEST_CASE("split_entries exact partitions") {
    const auto ten = split_entries(10, 10, 0.1, 10, 7);
    for (std::size_t s : check_partition(ten, 10, 10)) CHECK(s == 10);

    const auto big = split_entries(86, 23, 0.1, 10, 7);
    for (std::size_t s : check_partition(big, 86, 23)) CHECK((s == 197 || s == 198));
}

TEST_CASE("split_entries is deterministic given the seed") {
    const auto a = split_entries(12, 9, 0.2, 5, 42);
    const auto b = split_entries(12, 9, 0.2, 5, 42);
    const auto c = split_entries(12, 9, 0.2, 5, 43);
    for (std::size_t f = 0; f < a.size(); ++f) CHECK(a[f].hidden_cells == b[f].hidden_cells);
    bool differs = false;
    for (std::size_t f = 0; f < a.size(); ++f) differs = differs || a[f].hidden_cells != c[f].hidden_cells;
    CHECK(differs);
}

TEST_CASE("split_entries rejects bad parameters") {
    CHECK_THROWS_AS(split_entries(5, 5, 0.0, 10, 0), ParameterError);
    CHECK_THROWS_AS(split_entries(5, 5, 1.0, 1, 0), ParameterError);
    CHECK_THROWS_AS(split_entries(5, 5, 0.1, 5, 0), ParameterError);
    CHECK_THROWS_AS(split_entries(2, 2, 0.1, 10, 0), ParameterError);
}

TEST_CASE("split_axis partitions whole columns and rows") {
    const auto cols = split_axis(86, 23, Axis::cols, 10, 3);
    check_partition(cols, 86, 23);
    for (const FoldSplit& f : cols) {
        std::set<std::size_t> columns;
        for (const Cell& c : f.hidden_cells) columns.insert(c.col);
        CHECK((columns.size() == 2 || columns.size() == 3));
        CHECK(f.hidden_cells.size() == columns.size() * 86);
    }

    const auto rows = split_axis(86, 23, Axis::rows, 10, 3);
    check_partition(rows, 86, 23);
    for (const FoldSplit& f : rows) {
        std::set<std::size_t> r;
        for (const Cell& c : f.hidden_cells) r.insert(c.row);
        CHECK((r.size() == 8 || r.size() == 9));
    }

    // One fold per column: each fold hides exactly {(i, j) : all i}.
    const auto single = split_axis(4, 3, Axis::cols, 3, 0);
    for (const FoldSplit& f : single) {
        const std::size_t j = f.hidden_cells.front().col;
        std::vector<Cell> want;
        for (std::size_t i = 0; i < 4; ++i) want.push_back(Cell{i, j});
        CHECK(f.hidden_cells == want);
    }

    CHECK_THROWS_AS(split_axis(5, 3, Axis::cols, 4, 0), ParameterError);
}

TEST_CASE("split partition property over many shapes and seeds") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> dim(3, 30);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = dim(rng);
        const std::size_t n = dim(rng);
        const std::uint64_t seed = rng();
        const auto sizes = check_partition(split_entries(m, n, 0.2, 5, seed), m, n);
        CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
        check_partition(split_axis(m, n, Axis::rows, 3, seed), m, n);
        check_partition(split_axis(m, n, Axis::cols, 3, seed), m, n);
    }
}

TEST_CASE("repetition_seeds are deterministic and distinct") {
    const auto a = repetition_seeds(5, 10);
    CHECK(a == repetition_seeds(5, 10));
    CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 10);
    CHECK(repetition_seeds(5, 3) == std::vector<std::uint64_t>(a.begin(), a.begin() + 3));
}

TEST_CASE("run_cv with a perfect oracle scores 1 in every fold") {
    std::mt19937_64 rng(2);
    const AssociationDataset d = make_dataset(rng, 20, 10);
    const SimilaritySet sims = make_similarities(rng, 20, 10);
    for (Scheme scheme : {Scheme::entries, Scheme::viruses, Scheme::drugs}) {
        EvalOptions options;
        options.folds = scheme == Scheme::viruses ? 5 : 10;
        options.repetitions = 2;
        options.scorer = oracle(d.y);
        const EvalReport r = run_cv(d, sims, scheme, small_params(), 11, options);
        CHECK(r.scheme == to_string(scheme));
        CHECK(r.per_fold.size() == options.folds * 2);
        CHECK(r.seeds.size() == 2);
        REQUIRE(r.auc.has_value());
        CHECK(*r.auc == 1.0);
        CHECK(*r.aupr == 1.0);
        for (const FoldRecord& f : r.per_fold) {
            if (f.skipped) continue;
            CHECK(f.auc == 1.0);
            CHECK(f.aupr == 1.0);
        }
    }
}

TEST_CASE("run_cv hides test cells from the scorer") {
    std::mt19937_64 rng(3);
    const AssociationDataset d = make_dataset(rng, 12, 8);
    const SimilaritySet sims = make_similarities(rng, 12, 8);
    EvalOptions options;
    options.folds = 4;
    bool leaked = false;
    options.scorer = [&](const FoldProblem& p) {
        for (std::size_t i = 0; i < p.mask.rows(); ++i)
            for (std::size_t j = 0; j < p.mask.cols(); ++j)
                if (p.mask(i, j) == 0.0 && p.y_train(i, j) != 0.0) leaked = true;
        return p.y_train;
    };
    run_cv(d, sims, Scheme::entries, small_params(), 0, options);
    CHECK_FALSE(leaked);
}

TEST_CASE("run_cv skips single-class folds with a warning") {
    AssociationDataset d;
    d.y = Matrix(6, 4);
    d.y(0, 0) = 1.0;
    d.y(1, 0) = 1.0;
    for (std::size_t i = 0; i < 6; ++i) d.drugs.push_back("d" + std::to_string(i));
    for (std::size_t j = 0; j < 4; ++j) d.viruses.push_back("v" + std::to_string(j));
    std::mt19937_64 rng(4);
    const SimilaritySet sims = make_similarities(rng, 6, 4);
    EvalOptions options;
    options.folds = 4;
    options.scorer = oracle(d.y);
    HyperParams hp = small_params();
    hp.p = 2;
    const EvalReport r = run_cv(d, sims, Scheme::viruses, hp, 0, options);
    const auto skipped = std::count_if(r.per_fold.begin(), r.per_fold.end(), [](const FoldRecord& f) { return f.skipped; });
    CHECK(skipped == 3);
    CHECK(r.warnings.size() == 3);
    CHECK(r.auc == 1.0);
}

TEST_CASE("run_cv with the real solver is deterministic") {
    std::mt19937_64 rng(5);
    const AssociationDataset d = make_dataset(rng, 16, 10);
    const SimilaritySet sims = make_similarities(rng, 16, 10);
    EvalOptions options;
    options.folds = 5;
    const EvalReport a = run_cv(d, sims, Scheme::entries, small_params(), 9, options);
    const EvalReport b = run_cv(d, sims, Scheme::entries, small_params(), 9, options);
    CHECK(a.auc == b.auc);
    CHECK(a.aupr == b.aupr);
    REQUIRE(a.per_fold.size() == b.per_fold.size());
    for (std::size_t f = 0; f < a.per_fold.size(); ++f) CHECK(a.per_fold[f].auc == b.per_fold[f].auc);
    CHECK(*a.auc >= 0.0);
    CHECK(*a.auc <= 1.0);
}

TEST_CASE("run_loocv with a perfect oracle") {
    std::mt19937_64 rng(6);
    AssociationDataset d = make_dataset(rng, 15, 6);
    for (std::size_t i = 0; i < 15; ++i) d.y(i, 5) = 0.0;  // a virus without positives
    const SimilaritySet sims = make_similarities(rng, 15, 6);
    EvalOptions options;
    options.scorer = oracle(d.y);
    const std::vector<std::size_t> ks{3, 5, 7};
    const EvalReport r = run_loocv(d, sims, small_params(), ks, options);
    CHECK(r.scheme == "loo");
    REQUIRE(r.per_virus.size() == 6);
    for (const VirusRecord& v : r.per_virus) {
        for (std::size_t k : ks) {
            const double want = static_cast<double>(std::min(v.positives, k)) / static_cast<double>(k);
            CHECK(v.pre_at_k.at(k) == doctest::Approx(want));
            if (v.positives > 0) CHECK(v.rec_at_k.at(k) == doctest::Approx(static_cast<double>(std::min(v.positives, k)) / static_cast<double>(v.positives)));
        }
    }
    CHECK_FALSE(r.per_virus[5].rec_at_k.count(3));
    CHECK(std::any_of(r.warnings.begin(), r.warnings.end(),
                      [](const std::string& w) { return w.find("virus5") != std::string::npos; }));
    // Recall means cover the five viruses with positives only.
    double sum = 0.0;
    for (std::size_t j = 0; j < 5; ++j) sum += r.per_virus[j].rec_at_k.at(3);
    CHECK(r.rec_at_k.at(3) == doctest::Approx(sum / 5.0));
    CHECK_THROWS_AS(run_loocv(d, sims, small_params(), {}, options), ParameterError);
}

TEST_CASE("run_ablation: identical combos give identical reports") {
    std::mt19937_64 rng(7);
    const AssociationDataset d = make_dataset(rng, 14, 9);
    const SimilaritySet sims = make_similarities(rng, 14, 9);
    const SimilarityCombo combo{{"s1_d", "s2_d"}, {"s1_v"}};
    CHECK(combo.label() == "s1_d+s2_d|s1_v");
    EvalOptions options;
    options.folds = 4;
    const auto entries = run_ablation(d, sims, {combo, combo}, small_params(), 3, options);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].report.auc == entries[1].report.auc);
    CHECK(entries[0].report.aupr == entries[1].report.aupr);
}

TEST_CASE("run_ablation rejects unknown similarity names before fitting") {
    std::mt19937_64 rng(8);
    const AssociationDataset d = make_dataset(rng, 10, 6);
    const SimilaritySet sims = make_similarities(rng, 10, 6);
    EvalOptions options;
    bool called = false;
    options.scorer = [&](const FoldProblem& p) {
        called = true;
        return p.y_train;
    };
    const std::vector<SimilarityCombo> combos{{{"s1_d"}, {"s1_v"}}, {{"s9_d"}, {"s1_v"}}};
    CHECK_THROWS_AS(run_ablation(d, sims, combos, small_params(), 0, options), ConfigError);
    CHECK_FALSE(called);
    const std::vector<SimilarityCombo> empty{{{}, {"s1_v"}}};
    CHECK_THROWS_AS(run_ablation(d, sims, empty, small_params(), 0, options), ConfigError);
}

TEST_CASE("parse_scheme") {
    CHECK(parse_scheme("entries") == Scheme::entries);
    CHECK(parse_scheme("cv2") == Scheme::viruses);
    CHECK(parse_scheme("drugs") == Scheme::drugs);
    CHECK_THROWS_AS(parse_scheme("loo"), ConfigError);
}
