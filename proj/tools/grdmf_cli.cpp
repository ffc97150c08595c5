// grdmf: command-line driver for fitting, ranking and evaluating GRDMF models.

#include <CLI11.hpp>

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>

#include "grdmf/pipeline.hpp"
#include "grdmf/run_config.hpp"

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> association;
    std::vector<std::string> drug_sim;
    std::vector<std::string> virus_sim;
    std::vector<std::string> drug_profile;
    std::vector<std::string> virus_profile;
    std::optional<std::string> scheme;
    std::optional<std::size_t> layers;
    std::optional<double> mu;
    std::optional<double> theta;
    std::optional<double> alpha;
    std::optional<std::size_t> p;
    std::vector<std::size_t> dims;
    std::optional<std::size_t> iters;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> folds;
    std::optional<std::size_t> repetitions;
    std::vector<std::size_t> ks;
    std::optional<std::string> out;
    std::vector<std::string> viruses;
    std::optional<std::size_t> top;
    std::vector<std::string> combos;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file; flags override its values");
    cmd->add_option("--association", f.association, "Association CSV (drugs x viruses, binary)");
    cmd->add_option("--drug-sim", f.drug_sim, "Drug similarity CSV as NAME=PATH (repeatable)");
    cmd->add_option("--virus-sim", f.virus_sim, "Virus similarity CSV as NAME=PATH (repeatable)");
    cmd->add_option("--drug-profile", f.drug_profile, "Drug class profile CSV as [NAME=]PATH (default name s2_d)");
    cmd->add_option("--virus-profile", f.virus_profile, "Virus symptom profile CSV as [NAME=]PATH (default name s2_v)");
    cmd->add_option("--layers", f.layers, "Model depth used for default hyperparameters (2 or 3)");
    cmd->add_option("--mu", f.mu, "Graph regularization weight");
    cmd->add_option("--theta", f.theta, "Coupling weight");
    cmd->add_option("--alpha", f.alpha, "X-update stepsize in (0, 2)");
    cmd->add_option("-p,--neighbours", f.p, "Nearest neighbours kept per entity");
    cmd->add_option("--dims", f.dims, "Latent dimensions k1 k2 [k3]");
    cmd->add_option("--iters", f.iters, "Iteration count K");
    cmd->add_option("--seed", f.seed, "Base RNG seed");
    cmd->add_option("-o,--out", f.out, "Output directory");
}

std::pair<std::string, std::string> split_named(const std::string& text, const std::string& fallback) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        if (fallback.empty()) throw grdmf::ConfigError("expected NAME=PATH, got '" + text + "'");
        return {fallback, text};
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

void replace_sources(std::vector<grdmf::SimilaritySource>& side, const std::vector<std::string>& specs, bool profile,
                     const std::string& fallback) {
    if (specs.empty()) return;
    std::erase_if(side, [&](const grdmf::SimilaritySource& s) { return s.is_profile == profile; });
    for (const auto& spec : specs) {
        auto [name, path] = split_named(spec, specs.size() == 1 ? fallback : "");
        side.push_back({name, path, profile});
    }
}

grdmf::RunConfig resolve(const Flags& f, const std::string& default_scheme) {
    nlohmann::json j = nlohmann::json::object();
    std::filesystem::path base = ".";
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw grdmf::ConfigError("cannot open config file '" + *f.config + "'");
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw grdmf::ConfigError("config file '" + *f.config + "': " + e.what());
        }
        base = std::filesystem::path(*f.config).parent_path();
        if (base.empty()) base = ".";
    }

    grdmf::RunConfig c;
    c.scheme = f.scheme.value_or(j.is_object() && j.contains("scheme") ? j["scheme"].get<std::string>() : default_scheme);
    c.layers = f.layers.value_or(j.is_object() && j.contains("layers") ? j["layers"].get<std::size_t>() : 2);
    c.hp = grdmf::default_hyperparams(c.scheme, c.layers);
    grdmf::apply_config_json(c, j, base);
    c.scheme = f.scheme.value_or(c.scheme);
    c.layers = f.layers.value_or(c.layers);

    if (f.association) c.association = *f.association;
    replace_sources(c.drug_sources, f.drug_sim, false, "s1_d");
    replace_sources(c.virus_sources, f.virus_sim, false, "s1_v");
    replace_sources(c.drug_sources, f.drug_profile, true, "s2_d");
    replace_sources(c.virus_sources, f.virus_profile, true, "s2_v");
    if (f.mu) c.hp.mu = *f.mu;
    if (f.theta) c.hp.theta = *f.theta;
    if (f.alpha) c.hp.alpha = *f.alpha;
    if (f.p) c.hp.p = *f.p;
    if (!f.dims.empty()) c.hp.dims = f.dims;
    if (f.iters) c.hp.iters = *f.iters;
    if (f.seed) c.seed = *f.seed;
    if (f.folds) c.folds = *f.folds;
    if (f.repetitions) c.repetitions = *f.repetitions;
    if (!f.ks.empty()) c.ks = f.ks;
    if (f.out) c.output_dir = *f.out;
    if (!f.viruses.empty()) c.viruses = f.viruses;
    if (f.top) c.top = *f.top;
    if (!f.combos.empty()) {
        c.combos.clear();
        for (const auto& s : f.combos) c.combos.push_back(grdmf::parse_combo(s));
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-regularized deep matrix factorization for drug-virus association prediction"};
    app.require_subcommand(1);
    Flags f;

    auto* fit_cmd = app.add_subcommand("fit", "Fit on the full matrix; writes completed.csv and trace.csv");
    add_common(fit_cmd, f);

    auto* predict_cmd = app.add_subcommand("predict", "Top-k drugs per virus; writes recommendations.csv");
    add_common(predict_cmd, f);
    predict_cmd->add_option("--virus", f.viruses, "Virus to rank drugs for (repeatable)");
    predict_cmd->add_option("-k,--top", f.top, "List length (default 10)");

    auto* cv_cmd = app.add_subcommand("cv", "Cross validation; writes metrics_<scheme>.json");
    add_common(cv_cmd, f);
    cv_cmd->add_option("--scheme", f.scheme, "entries | viruses | drugs | loo")
        ->check(CLI::IsMember({"entries", "viruses", "drugs", "loo"}));
    cv_cmd->add_option("--folds", f.folds, "Number of folds (default 10)");
    cv_cmd->add_option("--repetitions", f.repetitions, "CV repetitions with derived seeds (default 10)");
    cv_cmd->add_option("--ks", f.ks, "k values for Pre@k / Rec@k in loo (default 3 5 7)");

    auto* ablation_cmd = app.add_subcommand("ablation", "Similarity-combination table; writes ablation.json");
    add_common(ablation_cmd, f);
    ablation_cmd->add_option("--combo", f.combos, "Combination such as s1_d+s2_d|s1_v (repeatable; default all)");
    ablation_cmd->add_option("--folds", f.folds, "Number of folds (default 10)");
    ablation_cmd->add_option("--repetitions", f.repetitions, "CV repetitions with derived seeds (default 10)");

    CLI11_PARSE(app, argc, argv);

    grdmf::Warnings warnings;
    try {
        std::vector<std::string> written;
        if (fit_cmd->parsed()) {
            written = grdmf::command_fit(resolve(f, "entries"), warnings);
        } else if (predict_cmd->parsed()) {
            written = grdmf::command_predict(resolve(f, "entries"), warnings);
        } else if (cv_cmd->parsed()) {
            written = grdmf::command_cv(resolve(f, "entries"), warnings);
        } else if (ablation_cmd->parsed()) {
            written = grdmf::command_ablation(resolve(f, "entries"), warnings);
        }
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& path : written) std::cout << path << "\n";
    } catch (const std::exception& e) {
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        std::cerr << "error: " << e.what() << "\n";
        try {
            std::rethrow_if_nested(e);
        } catch (const std::exception& inner) {
            std::cerr << "  caused by: " << inner.what() << "\n";
        }
        return 1;
    }
    return 0;
}
