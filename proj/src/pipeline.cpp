#include "grdmf/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "grdmf/csv_io.hpp"

namespace grdmf {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json k_map(const std::map<std::size_t, double>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[std::to_string(k)] = v;
    return out;
}

std::vector<NamedSimilarity> load_side(const std::vector<SimilaritySource>& sources,
                                       const std::vector<std::string>& registry, Warnings& warnings) {
    std::vector<NamedSimilarity> out;
    for (const auto& src : sources) {
        SimilarityMatrix s;
        if (src.is_profile) {
            const FeatureProfile profile = align_profile(load_profile_csv(src.path, &warnings), registry, &warnings);
            s = cosine_similarity(profile, &warnings);
        } else {
            s = align_similarity(load_similarity_csv(src.path, &warnings), registry, &warnings);
        }
        out.push_back(NamedSimilarity{src.name, std::move(s)});
    }
    return out;
}

}  // namespace

LoadedInputs load_inputs(const RunConfig& config) {
    config.validate();
    LoadedInputs in;
    in.dataset = load_association_csv(config.association);
    in.dataset.validate();
    in.similarities.drug = load_side(config.drug_sources, in.dataset.drugs, in.warnings);
    in.similarities.virus = load_side(config.virus_sources, in.dataset.viruses, in.warnings);
    in.similarities.validate_against(in.dataset);
    return in;
}

RecommendationList predict_topk(const Matrix& completed, const AssociationDataset& training,
                                const std::string& virus, std::size_t k, Warnings* warnings) {
    if (k < 1) throw ParameterError("predict_topk: k must be >= 1");
    const auto col = training.virus_index(virus);
    if (!col) throw LookupError("unknown virus '" + virus + "'");
    require_same_shape(completed, training.y, "predict_topk");

    const std::size_t m = completed.rows();
    if (k > m) {
        warn(warnings, "requested top-" + std::to_string(k) + " but only " + std::to_string(m) +
                           " drugs exist; returning the full ranking");
        k = m;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return completed(a, *col) > completed(b, *col); });

    RecommendationList out{virus, {}};
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t i = order[r];
        out.entries.push_back({r + 1, training.drugs[i], completed(i, *col), training.y(i, *col) == 1.0});
    }
    return out;
}

std::string format_recommendations_csv(const std::vector<RecommendationList>& lists) {
    std::string out = "virus,rank,drug,score,known\n";
    for (const auto& list : lists) {
        for (const auto& e : list.entries) {
            out += csv_field(list.virus) + "," + std::to_string(e.rank) + "," + csv_field(e.drug) + "," +
                   format_real(e.score) + "," + (e.known ? "1" : "0") + "\n";
        }
    }
    return out;
}

json report_to_json(const EvalReport& report, const json& config) {
    json folds = json::array();
    if (report.scheme == "loo") {
        for (const auto& v : report.per_virus) {
            json rec{{"virus", v.virus},
                     {"positives", v.positives},
                     {"auc", optional_number(v.auc)},
                     {"aupr", optional_number(v.aupr)},
                     {"pre_at_k", k_map(v.pre_at_k)},
                     {"rec_at_k", k_map(v.rec_at_k)}};
            folds.push_back(std::move(rec));
        }
    } else {
        for (const auto& f : report.per_fold) {
            folds.push_back(json{{"repetition", f.repetition},
                                 {"seed", f.seed},
                                 {"fold", f.fold_id},
                                 {"hidden", f.hidden},
                                 {"positives", f.positives},
                                 {"skipped", f.skipped},
                                 {"auc", optional_number(f.auc)},
                                 {"aupr", optional_number(f.aupr)}});
        }
    }
    return json{{"config", config},
                {"scheme", report.scheme},
                {"seeds", report.seeds},
                {"folds", std::move(folds)},
                {"mean",
                 {{"auc", optional_number(report.auc)},
                  {"aupr", optional_number(report.aupr)},
                  {"pre_at_k", k_map(report.pre_at_k)},
                  {"rec_at_k", k_map(report.rec_at_k)}}},
                {"warnings", report.warnings}};
}

json ablation_to_json(const std::vector<AblationEntry>& entries, const json& config) {
    json combos = json::array();
    for (const auto& e : entries) {
        json r = report_to_json(e.report, nullptr);
        r.erase("config");
        combos.push_back(json{{"combo", e.combo.label()},
                              {"drug", e.combo.drug},
                              {"virus", e.combo.virus},
                              {"report", std::move(r)}});
    }
    return json{{"config", config}, {"scheme", "entries"}, {"combos", std::move(combos)}};
}

std::vector<std::string> command_fit(const RunConfig& config, Warnings& warnings) {
    LoadedInputs in = load_inputs(config);
    warnings.insert(warnings.end(), in.warnings.begin(), in.warnings.end());
    const AssociationDataset& d = in.dataset;

    std::vector<SimilarityMatrix> drug;
    std::vector<SimilarityMatrix> virus;
    for (const auto& s : in.similarities.drug) drug.push_back(s.similarity);
    for (const auto& s : in.similarities.virus) virus.push_back(s.similarity);
    const LaplacianMatrix l_d = graph_laplacian(drug, config.hp.p);
    const LaplacianMatrix l_v = graph_laplacian(virus, config.hp.p);

    const Matrix mask(d.y.rows(), d.y.cols(), 1.0);
    const FitResult result = fit(d.y, mask, l_d, l_v, config.hp);
    if (result.trace.floor_events > 0) {
        warnings.push_back(std::to_string(result.trace.floor_events) + " eigenvalue flooring events during the fit");
    }

    const auto completed = config.output_dir / "completed.csv";
    const auto trace = config.output_dir / "trace.csv";
    write_text(completed, format_labelled_csv(d.drugs, d.viruses, result.x, "drug"));
    write_text(trace, format_trace_csv(result.trace));
    return {completed.string(), trace.string()};
}

std::vector<std::string> command_predict(const RunConfig& config, Warnings& warnings) {
    if (config.viruses.empty()) throw ConfigError("predict needs at least one --virus");
    LoadedInputs in = load_inputs(config);
    warnings.insert(warnings.end(), in.warnings.begin(), in.warnings.end());
    const AssociationDataset& d = in.dataset;
    for (const auto& v : config.viruses) {
        if (!d.virus_index(v)) throw LookupError("unknown virus '" + v + "'");
    }

    std::vector<SimilarityMatrix> drug;
    std::vector<SimilarityMatrix> virus;
    for (const auto& s : in.similarities.drug) drug.push_back(s.similarity);
    for (const auto& s : in.similarities.virus) virus.push_back(s.similarity);
    const Matrix mask(d.y.rows(), d.y.cols(), 1.0);
    const FitResult result =
        fit(d.y, mask, graph_laplacian(drug, config.hp.p), graph_laplacian(virus, config.hp.p), config.hp);

    std::vector<RecommendationList> lists;
    for (const auto& v : config.viruses) lists.push_back(predict_topk(result.x, d, v, config.top, &warnings));
    const auto path = config.output_dir / "recommendations.csv";
    write_text(path, format_recommendations_csv(lists));
    return {path.string()};
}

std::vector<std::string> command_cv(const RunConfig& config, Warnings& warnings) {
    LoadedInputs in = load_inputs(config);
    warnings.insert(warnings.end(), in.warnings.begin(), in.warnings.end());

    EvalOptions options;
    options.folds = config.folds;
    options.repetitions = config.repetitions;
    EvalReport report = config.scheme == "loo"
                            ? run_loocv(in.dataset, in.similarities, config.hp, config.ks, options)
                            : run_cv(in.dataset, in.similarities, parse_scheme(config.scheme), config.hp,
                                     config.seed, options);
    warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());

    const auto path = config.output_dir / ("metrics_" + config.scheme + ".json");
    write_text(path, report_to_json(report, describe_config(config)).dump(2) + "\n");
    return {path.string()};
}

std::vector<std::string> command_ablation(const RunConfig& config, Warnings& warnings) {
    LoadedInputs in = load_inputs(config);
    warnings.insert(warnings.end(), in.warnings.begin(), in.warnings.end());

    RunConfig resolved = config;
    if (resolved.combos.empty()) {
        std::vector<std::string> drug_names;
        std::vector<std::string> virus_names;
        for (const auto& s : in.similarities.drug) drug_names.push_back(s.name);
        for (const auto& s : in.similarities.virus) virus_names.push_back(s.name);
        resolved.combos = all_combos(drug_names, virus_names);
    }
    resolved.scheme = "entries";

    EvalOptions options;
    options.folds = config.folds;
    options.repetitions = config.repetitions;
    const auto entries =
        run_ablation(in.dataset, in.similarities, resolved.combos, resolved.hp, resolved.seed, options);
    for (const auto& e : entries) warnings.insert(warnings.end(), e.report.warnings.begin(), e.report.warnings.end());

    const auto path = config.output_dir / "ablation.json";
    write_text(path, ablation_to_json(entries, describe_config(resolved)).dump(2) + "\n");
    return {path.string()};
}

}  // namespace grdmf
