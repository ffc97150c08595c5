#include "grdmf/run_config.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace grdmf {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<SimilaritySource> parse_sources(const nlohmann::json& j, bool profile, const std::string& fallback,
                                            const std::filesystem::path& base_dir) {
    std::vector<SimilaritySource> out;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() ? base_dir / path : path;
    };
    if (j.is_string()) {
        out.push_back({fallback, resolve(j.get<std::string>()), profile});
    } else if (j.is_object()) {
        for (const auto& [name, path] : j.items()) out.push_back({name, resolve(path.get<std::string>()), profile});
    } else {
        throw ConfigError("similarity sources must be a path or an object of name: path");
    }
    return out;
}

// Replaces the sources of one kind (matrix or profile), keeping the other kind.
void replace_kind(std::vector<SimilaritySource>& side, std::vector<SimilaritySource> incoming, bool profile) {
    std::erase_if(side, [&](const SimilaritySource& s) { return s.is_profile == profile; });
    side.insert(side.end(), incoming.begin(), incoming.end());
}

}  // namespace

HyperParams default_hyperparams(const std::string& scheme, std::size_t layers) {
    HyperParams hp;
    hp.iters = 10;
    const std::string s = scheme == "loo" ? "viruses" : scheme;
    if (layers == 2) {
        if (s == "viruses") {
            hp.theta = 10, hp.p = 2, hp.alpha = 0.01, hp.mu = 50, hp.dims = {20, 15};
        } else if (s == "drugs") {
            hp.theta = 2, hp.p = 5, hp.alpha = 0.1, hp.mu = 10, hp.dims = {17, 10};
        } else {
            hp.theta = 1, hp.p = 2, hp.alpha = 0.05, hp.mu = 100, hp.dims = {17, 15};
        }
    } else if (layers == 3) {
        if (s == "viruses") {
            hp.theta = 1, hp.p = 5, hp.alpha = 1, hp.mu = 0.01, hp.dims = {20, 15, 10};
        } else if (s == "drugs") {
            hp.theta = 2, hp.p = 5, hp.alpha = 1.5, hp.mu = 5, hp.dims = {23, 10, 7};
        } else {
            hp.theta = 1, hp.p = 5, hp.alpha = 1, hp.mu = 5, hp.dims = {23, 10, 7};
        }
    } else {
        throw ConfigError("tuned defaults exist for 2 and 3 layers only; pass --dims explicitly");
    }
    return hp;
}

SimilarityCombo parse_combo(const std::string& text) {
    const auto sides = split(text, '|');
    if (sides.size() != 2) {
        throw ConfigError("combination '" + text + "' must look like drug+names|virus+names");
    }
    SimilarityCombo combo;
    for (const auto& n : split(sides[0], '+'))
        if (!n.empty()) combo.drug.push_back(n);
    for (const auto& n : split(sides[1], '+'))
        if (!n.empty()) combo.virus.push_back(n);
    if (combo.drug.empty() || combo.virus.empty()) {
        throw ConfigError("combination '" + text + "' needs at least one drug and one virus similarity");
    }
    return combo;
}

std::vector<SimilarityCombo> all_combos(const std::vector<std::string>& drug_names,
                                        const std::vector<std::string>& virus_names) {
    auto subsets = [](const std::vector<std::string>& names) {
        std::vector<std::vector<std::string>> out;
        const std::size_t total = std::size_t{1} << names.size();
        for (std::size_t size = 1; size <= names.size(); ++size) {
            for (std::size_t bits = 1; bits < total; ++bits) {
                if (static_cast<std::size_t>(__builtin_popcountll(bits)) != size) continue;
                std::vector<std::string> subset;
                for (std::size_t k = 0; k < names.size(); ++k)
                    if (bits & (std::size_t{1} << k)) subset.push_back(names[k]);
                out.push_back(std::move(subset));
            }
        }
        return out;
    };
    std::vector<SimilarityCombo> out;
    for (const auto& d : subsets(drug_names))
        for (const auto& v : subsets(virus_names)) out.push_back({d, v});
    return out;
}

void RunConfig::validate() const {
    if (association.empty()) throw ConfigError("no association file given");
    auto check = [](const std::filesystem::path& p, const std::string& what) {
        if (!std::filesystem::is_regular_file(p)) {
            throw ConfigError(what + " file '" + p.string() + "' does not exist");
        }
    };
    check(association, "association");
    if (drug_sources.empty()) throw ConfigError("no drug-side similarity source given");
    if (virus_sources.empty()) throw ConfigError("no virus-side similarity source given");
    std::set<std::string> names;
    for (const auto* side : {&drug_sources, &virus_sources}) {
        for (const auto& s : *side) {
            check(s.path, "similarity '" + s.name + "'");
            if (!names.insert(s.name).second) throw ConfigError("similarity name '" + s.name + "' used twice");
        }
    }
    hp.validate();
    if (scheme != "loo") parse_scheme(scheme);
    if (folds < 2) throw ConfigError("at least two folds are required");
    if (repetitions < 1) throw ConfigError("at least one repetition is required");
    if (ks.empty()) throw ConfigError("no k values given");
    if (top < 1) throw ConfigError("--top must be >= 1");
}

void apply_config_json(RunConfig& config, const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    static const std::set<std::string> known{
        "association", "drug_similarity", "virus_similarity", "drug_profile", "virus_profile", "scheme",
        "layers",      "mu",              "theta",            "alpha",        "p",             "dims",
        "iters",       "ks",              "seed",             "folds",        "repetitions",   "viruses",
        "top",         "combos",          "output"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    try {
        auto resolve = [&](const std::string& p) {
            std::filesystem::path path(p);
            return path.is_relative() ? base_dir / path : path;
        };
        if (j.contains("scheme")) config.scheme = j["scheme"].get<std::string>();
        if (j.contains("layers")) config.layers = j["layers"].get<std::size_t>();
        if (j.contains("association")) config.association = resolve(j["association"].get<std::string>());
        if (j.contains("drug_similarity"))
            replace_kind(config.drug_sources, parse_sources(j["drug_similarity"], false, "s1_d", base_dir), false);
        if (j.contains("virus_similarity"))
            replace_kind(config.virus_sources, parse_sources(j["virus_similarity"], false, "s1_v", base_dir), false);
        if (j.contains("drug_profile"))
            replace_kind(config.drug_sources, parse_sources(j["drug_profile"], true, "s2_d", base_dir), true);
        if (j.contains("virus_profile"))
            replace_kind(config.virus_sources, parse_sources(j["virus_profile"], true, "s2_v", base_dir), true);
        if (j.contains("mu")) config.hp.mu = j["mu"].get<double>();
        if (j.contains("theta")) config.hp.theta = j["theta"].get<double>();
        if (j.contains("alpha")) config.hp.alpha = j["alpha"].get<double>();
        if (j.contains("p")) config.hp.p = j["p"].get<std::size_t>();
        if (j.contains("dims")) config.hp.dims = j["dims"].get<std::vector<std::size_t>>();
        if (j.contains("iters")) config.hp.iters = j["iters"].get<std::size_t>();
        if (j.contains("ks")) config.ks = j["ks"].get<std::vector<std::size_t>>();
        if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("folds")) config.folds = j["folds"].get<std::size_t>();
        if (j.contains("repetitions")) config.repetitions = j["repetitions"].get<std::size_t>();
        if (j.contains("viruses")) config.viruses = j["viruses"].get<std::vector<std::string>>();
        if (j.contains("top")) config.top = j["top"].get<std::size_t>();
        if (j.contains("combos")) {
            config.combos.clear();
            for (const auto& c : j["combos"]) config.combos.push_back(parse_combo(c.get<std::string>()));
        }
        if (j.contains("output")) config.output_dir = resolve(j["output"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path.string() + "' for hashing");

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
    std::array<char, 1 << 14> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 0xF];
    }
    return out;
}

nlohmann::json describe_config(const RunConfig& config) {
    using nlohmann::json;
    auto file = [](const std::filesystem::path& p) {
        return json{{"path", p.lexically_normal().generic_string()}, {"sha256", sha256_file(p)}};
    };
    auto sources = [&](const std::vector<SimilaritySource>& side) {
        json out = json::array();
        for (const auto& s : side) {
            json entry = file(s.path);
            entry["name"] = s.name;
            entry["kind"] = s.is_profile ? "profile" : "similarity";
            out.push_back(entry);
        }
        return out;
    };
    json combos = json::array();
    for (const auto& c : config.combos) combos.push_back(c.label());

    return json{
        {"association", file(config.association)},
        {"drug_sources", sources(config.drug_sources)},
        {"virus_sources", sources(config.virus_sources)},
        {"scheme", config.scheme},
        {"layers", config.layers},
        {"hyperparameters",
         {{"mu", config.hp.mu},
          {"theta", config.hp.theta},
          {"alpha", config.hp.alpha},
          {"sigma", HyperParams::sigma},
          {"p", config.hp.p},
          {"dims", config.hp.dims},
          {"iters", config.hp.iters}}},
        {"ks", config.ks},
        {"seed", config.seed},
        {"folds", config.folds},
        {"repetitions", config.repetitions},
        {"viruses", config.viruses},
        {"top", config.top},
        {"combos", combos},
    };
}

}  // namespace grdmf
