#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gm/analysis.hpp"
#include "gm/bench.hpp"
#include "gm/error.hpp"
#include "gm/clustering.hpp"
#include "gm/graph.hpp"
#include "gm/lfr.hpp"
#include "gm/matrices.hpp"
#include "gm/measures.hpp"
#include "gm/scoring.hpp"

namespace py = pybind11;

namespace {

gm::MeasureId measure_from_name(const std::string& name) {
    const auto id = gm::parse_measure(name);
    if (!id) throw py::value_error("unknown measure: " + name);
    return *id;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "graph measures, kernel k-means, LFR graphs, benchmark scoring";

    py::register_exception<gm::Error>(m, "GraphMeasureError");

    py::class_<gm::Graph>(m, "Graph")
        .def(py::init([](int n, std::vector<std::pair<int, int>> edges,
                         std::vector<int> communities) {
                 return gm::make_graph(n, std::move(edges), std::move(communities));
             }),
             py::arg("n"), py::arg("edges"), py::arg("communities"))
        .def_readonly("n", &gm::Graph::n)
        .def_readonly("edges", &gm::Graph::edges)
        .def_readonly("communities", &gm::Graph::communities)
        .def_property_readonly("k", &gm::Graph::community_count)
        .def("degrees", &gm::Graph::degrees)
        .def("__repr__", [](const gm::Graph& g) {
            return "Graph(n=" + std::to_string(g.n) +
                   ", m=" + std::to_string(g.edges.size()) +
                   ", k=" + std::to_string(g.community_count()) + ")";
        });

    m.def("load_graph", &gm::load_graph, py::arg("path"));
    m.def("save_graph", &gm::save_graph, py::arg("graph"), py::arg("path"));
    m.def("is_connected", &gm::is_connected, py::arg("graph"));

    m.def("measure_names", [] {
        std::vector<std::string> names;
        for (const auto& id : gm::measure_catalog()) names.push_back(gm::measure_name(id));
        return names;
    });

    m.def(
        "build_measure",
        [](const gm::Graph& g, const std::string& name, double x, const std::string& sigmoid) {
            const gm::DerivedMatrices dm = gm::derive_matrices(g);
            gm::MeasureOptions opts;
            if (sigmoid == "positive") opts.sigmoid_sign = gm::SigmoidSign::Positive;
            gm::MeasureEngine engine(dm, opts);
            return engine.build(measure_from_name(name), x).values;
        },
        py::arg("graph"), py::arg("measure"), py::arg("x"), py::arg("sigmoid_sign") = "negative",
        "Kernel matrix of one measure at grid parameter x in [0, 1].");

    m.def(
        "derived_matrices",
        [](const gm::Graph& g) {
            const gm::DerivedMatrices dm = gm::derive_matrices(g);
            py::dict out;
            out["adjacency"] = dm.adjacency;
            out["laplacian"] = dm.laplacian;
            out["markov"] = dm.markov;
            out["norm_laplacian"] = dm.norm_laplacian;
            out["hop_distance"] = dm.hop_distance;
            out["volume"] = dm.volume;
            out["spectral_radius"] = dm.spectral_radius;
            return out;
        },
        py::arg("graph"));

    m.def(
        "cluster",
        [](const Eigen::MatrixXd& kernel, int k, const gm::Graph& g,
           const std::string& criterion, std::uint64_t seed) {
            gm::BestTrialOptions opts;
            opts.criterion = gm::parse_criterion(criterion);
            opts.base_seed = seed;
            const gm::ClusteringResult res = gm::cluster_best_trial(kernel, k, g, opts);
            py::dict out;
            out["labels"] = res.labels;
            out["inertia"] = res.inertia;
            out["modularity"] = res.modularity;
            out["trial_index"] = res.trial_index;
            return out;
        },
        py::arg("kernel"), py::arg("k"), py::arg("graph"), py::arg("criterion") = "inertia",
        py::arg("seed") = 0,
        "Best kernel k-means labeling over 18 seeded trials.");

    m.def("ari", &gm::ari, py::arg("labels_a"), py::arg("labels_b"));
    m.def("modularity", &gm::modularity, py::arg("graph"), py::arg("labels"));

    m.def(
        "sample_lfr_config",
        [](int n_lo, int n_hi, std::uint64_t seed) {
            const gm::SampledConfig cfg = gm::sample_lfr_config(n_lo, n_hi, seed);
            py::dict out;
            out["n"] = cfg.params.n;
            out["tau1"] = cfg.params.tau1;
            out["tau2"] = cfg.params.tau2;
            out["mu"] = cfg.params.mu;
            out["avg_degree"] = cfg.params.avg_degree;
            out["seed"] = cfg.seed;
            return out;
        },
        py::arg("n_lo") = 11, py::arg("n_hi") = 1499, py::arg("seed") = 0);

    m.def(
        "generate_lfr",
        [](int n, double tau1, double tau2, double mu, double avg_degree, std::uint64_t seed) {
            gm::SampledConfig cfg;
            cfg.params.n = n;
            cfg.params.tau1 = tau1;
            cfg.params.tau2 = tau2;
            cfg.params.mu = mu;
            cfg.params.avg_degree = avg_degree;
            cfg.seed = seed;
            const gm::LfrOutcome outcome = gm::generate_lfr(cfg);
            py::dict out;
            out["graph"] = outcome.graph;
            out["attempts"] = outcome.attempts;
            out["realized_mixing"] = outcome.realized_mixing;
            out["realized_avg_degree"] = outcome.realized_avg_degree;
            return out;
        },
        py::arg("n"), py::arg("tau1"), py::arg("tau2"), py::arg("mu"), py::arg("avg_degree"),
        py::arg("seed") = 0);

    m.def(
        "evaluate_measure",
        [](const gm::Graph& g, const std::string& graph_id, const std::string& name,
           const std::string& criterion, const std::string& sigmoid) {
            gm::MeasureOptions opts;
            if (sigmoid == "positive") opts.sigmoid_sign = gm::SigmoidSign::Positive;
            const gm::EvalRecord rec = gm::evaluate_measure(
                g, graph_id, measure_from_name(name), gm::parse_criterion(criterion), opts);
            py::dict out;
            out["graph_id"] = rec.graph_id;
            out["measure"] = gm::measure_name(rec.measure);
            out["best_x"] = rec.best_x;
            out["best_ari"] = rec.best_ari;
            out["per_x_ari"] = rec.per_x_ari;
            out["failures"] = rec.failures;
            return out;
        },
        py::arg("graph"), py::arg("graph_id"), py::arg("measure"),
        py::arg("criterion") = "inertia", py::arg("sigmoid_sign") = "negative",
        "16-point grid sweep of one measure on one graph.");
}
