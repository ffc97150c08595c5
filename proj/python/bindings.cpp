#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grdmf/csv_io.hpp"
#include "grdmf/evaluation.hpp"
#include "grdmf/graph.hpp"
#include "grdmf/linalg.hpp"
#include "grdmf/metrics.hpp"
#include "grdmf/solver.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

grdmf::Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return grdmf::Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const grdmf::Matrix& m) {
    Array out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

grdmf::SimilarityMatrix to_similarity(const Array& a) { return grdmf::SimilarityMatrix{{}, to_matrix(a)}; }

std::vector<grdmf::NamedSimilarity> to_named(const std::vector<Array>& arrays, const char* prefix) {
    std::vector<grdmf::NamedSimilarity> out;
    for (std::size_t k = 0; k < arrays.size(); ++k) {
        out.push_back({std::string("s") + std::to_string(k + 1) + prefix, to_similarity(arrays[k])});
    }
    return out;
}

py::dict report_dict(const grdmf::EvalReport& r) {
    py::list folds;
    for (const auto& f : r.per_fold) {
        py::dict d;
        d["repetition"] = f.repetition;
        d["seed"] = f.seed;
        d["fold"] = f.fold_id;
        d["hidden"] = f.hidden;
        d["positives"] = f.positives;
        d["skipped"] = f.skipped;
        d["auc"] = f.auc;
        d["aupr"] = f.aupr;
        d["fit_seconds"] = f.fit_seconds;
        folds.append(d);
    }
    py::dict out;
    out["scheme"] = r.scheme;
    out["seeds"] = r.seeds;
    out["auc"] = r.auc;
    out["aupr"] = r.aupr;
    out["folds"] = folds;
    out["pre_at_k"] = r.pre_at_k;
    out["rec_at_k"] = r.rec_at_k;
    out["warnings"] = r.warnings;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Graph-regularized deep matrix factorization solved with HyPALM";

    py::register_exception<grdmf::Error>(m, "GrdmfError", PyExc_ValueError);

    m.def("sym_eigen", [](const Array& a) {
        const auto e = grdmf::sym_eigen(to_matrix(a));
        return py::make_tuple(e.values, to_array(e.vectors));
    }, py::arg("a"), "Symmetric eigendecomposition; returns (ascending values, vectors).");

    m.def("truncated_svd", [](const Array& a, std::size_t r) {
        const auto s = grdmf::truncated_svd(to_matrix(a), r);
        return py::make_tuple(to_array(s.left), s.singular, to_array(s.right));
    }, py::arg("a"), py::arg("r"));

    m.def("solve_sylvester_sym", [](const Array& a, const Array& b, const Array& c) {
        return to_array(grdmf::solve_sylvester_sym(to_matrix(a), to_matrix(b), to_matrix(c)));
    }, py::arg("a"), py::arg("b"), py::arg("c"), "Solves a·x + x·b = c for symmetric a and b.");

    m.def("spd_inverse", [](const Array& a) {
        const auto r = grdmf::spd_inverse(to_matrix(a));
        return py::make_tuple(to_array(r.inverse), r.floored);
    }, py::arg("a"));

    m.def("cosine_similarity", [](const Array& indicator) {
        const grdmf::Matrix x = to_matrix(indicator);
        grdmf::FeatureProfile profile;
        profile.indicator = x;
        for (std::size_t i = 0; i < x.rows(); ++i) profile.entities.push_back(std::to_string(i));
        for (std::size_t j = 0; j < x.cols(); ++j) profile.features.push_back(std::to_string(j));
        return to_array(grdmf::cosine_similarity(profile).values);
    }, py::arg("indicator"));

    m.def("sparsify_pnn", [](const Array& s, std::size_t p) {
        return to_array(grdmf::sparsify_pnn(to_similarity(s), p).values);
    }, py::arg("s"), py::arg("p"));

    m.def("laplacian", [](const Array& s) { return to_array(grdmf::laplacian(to_similarity(s)).values); },
          py::arg("s"));

    m.def("graph_laplacian", [](const std::vector<Array>& sims, std::size_t p) {
        std::vector<grdmf::SimilarityMatrix> parts;
        for (const auto& s : sims) parts.push_back(to_similarity(s));
        return to_array(grdmf::graph_laplacian(parts, p).values);
    }, py::arg("similarities"), py::arg("p"), "Sparsify each similarity with p and sum their Laplacians.");

    py::class_<grdmf::HyperParams>(m, "HyperParams")
        .def(py::init([](double mu, double theta, double alpha, std::size_t p, std::vector<std::size_t> dims,
                         std::size_t iters) {
                 grdmf::HyperParams hp;
                 hp.mu = mu;
                 hp.theta = theta;
                 hp.alpha = alpha;
                 hp.p = p;
                 hp.dims = std::move(dims);
                 hp.iters = iters;
                 hp.validate();
                 return hp;
             }),
             py::arg("mu"), py::arg("theta"), py::arg("alpha"), py::arg("p"), py::arg("dims"), py::arg("iters") = 10)
        .def_readwrite("mu", &grdmf::HyperParams::mu)
        .def_readwrite("theta", &grdmf::HyperParams::theta)
        .def_readwrite("alpha", &grdmf::HyperParams::alpha)
        .def_readwrite("p", &grdmf::HyperParams::p)
        .def_readwrite("dims", &grdmf::HyperParams::dims)
        .def_readwrite("iters", &grdmf::HyperParams::iters)
        .def_property_readonly_static("sigma", [](py::object) { return grdmf::HyperParams::sigma; });

    m.def("fit", [](const Array& y, const Array& mask, const Array& l_d, const Array& l_v,
                    const grdmf::HyperParams& hp) {
        const grdmf::Matrix ym = to_matrix(y);
        const grdmf::Matrix mm = to_matrix(mask);
        const grdmf::LaplacianMatrix ld{to_matrix(l_d)};
        const grdmf::LaplacianMatrix lv{to_matrix(l_v)};
        grdmf::FitResult r;
        {
            py::gil_scoped_release release;
            r = grdmf::fit(ym, mm, ld, lv, hp);
        }
        py::list middles;
        for (const auto& f : r.factors.middles) middles.append(to_array(f));
        py::dict out;
        out["x"] = to_array(r.x);
        out["u1"] = to_array(r.factors.u1);
        out["middles"] = middles;
        out["v"] = to_array(r.factors.v);
        out["loss"] = r.trace.loss;
        out["floor_events"] = r.trace.floor_events;
        out["wall_time"] = r.trace.wall_time;
        return out;
    }, py::arg("y"), py::arg("mask"), py::arg("l_d"), py::arg("l_v"), py::arg("hp"));

    m.def("auc", [](const std::vector<double>& s, const std::vector<int>& l) { return grdmf::auc(s, l); },
          py::arg("scores"), py::arg("labels"));
    m.def("aupr", [](const std::vector<double>& s, const std::vector<int>& l) { return grdmf::aupr(s, l); },
          py::arg("scores"), py::arg("labels"));
    m.def("topk_metrics", [](const std::vector<double>& s, const std::vector<int>& l, std::size_t k) {
        const auto t = grdmf::topk_metrics(s, l, k);
        return py::make_tuple(t.precision, t.recall);
    }, py::arg("scores"), py::arg("labels"), py::arg("k"));

    m.def("split_entries", [](std::size_t rows, std::size_t cols, std::size_t folds, std::uint64_t seed) {
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
        for (const auto& f : grdmf::split_entries(rows, cols, 1.0 / static_cast<double>(folds), folds, seed)) {
            auto& cells = out.emplace_back();
            for (const auto& c : f.hidden_cells) cells.emplace_back(c.row, c.col);
        }
        return out;
    }, py::arg("rows"), py::arg("cols"), py::arg("folds"), py::arg("seed"));

    m.def("run_cv", [](const Array& y, const std::vector<Array>& drug_sims, const std::vector<Array>& virus_sims,
                       const std::string& scheme, const grdmf::HyperParams& hp, std::uint64_t seed, std::size_t folds,
                       std::size_t repetitions) {
        grdmf::AssociationDataset d;
        d.y = to_matrix(y);
        for (std::size_t i = 0; i < d.y.rows(); ++i) d.drugs.push_back("d" + std::to_string(i));
        for (std::size_t j = 0; j < d.y.cols(); ++j) d.viruses.push_back("v" + std::to_string(j));
        grdmf::SimilaritySet sims{to_named(drug_sims, "_d"), to_named(virus_sims, "_v")};
        grdmf::EvalOptions options;
        options.folds = folds;
        options.repetitions = repetitions;
        const grdmf::Scheme parsed = grdmf::parse_scheme(scheme);
        grdmf::EvalReport report;
        {
            py::gil_scoped_release release;
            report = grdmf::run_cv(d, sims, parsed, hp, seed, options);
        }
        return report_dict(report);
    }, py::arg("y"), py::arg("drug_similarities"), py::arg("virus_similarities"), py::arg("scheme"), py::arg("hp"),
       py::arg("seed") = 0, py::arg("folds") = 10, py::arg("repetitions") = 1);

    m.def("load_association_csv", [](const std::string& path) {
        const auto d = grdmf::load_association_csv(path);
        return py::make_tuple(d.drugs, d.viruses, to_array(d.y));
    }, py::arg("path"), "Returns (drug names, virus names, matrix).");
}
