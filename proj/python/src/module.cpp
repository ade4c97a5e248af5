#include "banknet/aml.hpp"
#include "banknet/centrality.hpp"
#include "banknet/community.hpp"
#include "banknet/error.hpp"
#include "banknet/ingest.hpp"
#include "banknet/report_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <tuple>

namespace py = pybind11;
using namespace banknet;

namespace {

using Triple = std::tuple<std::string, std::string, double>;

WeightedDigraph make_graph(const std::vector<Triple>& edges, std::optional<std::vector<std::string>> universe) {
    std::vector<LabeledEdge> triples;
    triples.reserve(edges.size());
    for (const auto& [s, t, w] : edges) triples.push_back({s, t, w});
    return universe ? build_graph(std::move(*universe), triples) : build_graph(triples);
}

std::map<std::string, double> by_label(const WeightedDigraph& g, const std::vector<double>& v) {
    std::map<std::string, double> out;
    for (NodeId u = 0; u < g.node_count(); ++u) out.emplace(g.label(u), v[u]);
    return out;
}

py::list report_rows(const CentralityReport& r) {
    py::list rows;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const auto& s = r.nodes[i];
        py::dict row;
        row["country"] = r.labels[i];
        row["con"] = s.con;
        row["pagerank"] = s.pagerank;
        row["con_norm"] = s.con_norm;
        row["pr_norm"] = s.pr_norm;
        row["epsilon"] = s.epsilon;
        row["class"] = std::string(to_string(s.leader_class));
        rows.append(row);
    }
    return rows;
}

CentralityConfig centrality_config(const std::string& combiner, double damping, double tolerance, std::uint32_t max_iterations,
                                   double low_key, double highly_exposed) {
    CentralityConfig cfg;
    cfg.con.combiner = parse_combiner(combiner);
    cfg.pagerank.damping = damping;
    cfg.pagerank.tolerance = tolerance;
    cfg.pagerank.max_iterations = max_iterations;
    cfg.thresholds.low_key = low_key;
    cfg.thresholds.highly_exposed = highly_exposed;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_banknet, m) {
    m.doc() = "Weighted digraph analytics for banking and transaction networks";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
    error.call_once_and_store_result([&] { return py::exception<Error>(m, "BanknetError", PyExc_ValueError); });
    // args are (message, kind name)
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetObject(error.get_stored().ptr(), py::make_tuple(e.what(), std::string(to_string(e.kind()))).ptr());
        }
    });

    py::class_<WeightedDigraph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("edges"), py::arg("universe") = py::none(),
             "Build from (source, target, weight) triples; an explicit universe keeps isolated nodes.")
        .def_property_readonly("node_count", &WeightedDigraph::node_count)
        .def_property_readonly("edge_count", &WeightedDigraph::edge_count)
        .def_property_readonly("labels",
                               [](const WeightedDigraph& g) { return std::vector<std::string>(g.labels().begin(), g.labels().end()); })
        .def("edges",
             [](const WeightedDigraph& g) {
                 std::vector<Triple> out;
                 g.for_each_edge([&](NodeId u, NodeId v, double w) { out.emplace_back(g.label(u), g.label(v), w); });
                 return out;
             })
        .def("weight",
             [](const WeightedDigraph& g, const std::string& a, const std::string& b) { return g.weight(g.id_of(a), g.id_of(b)); })
        .def("reversed", [](const WeightedDigraph& g) { return reverse(g); })
        .def("__len__", &WeightedDigraph::node_count)
        .def("__eq__", [](const WeightedDigraph& a, const WeightedDigraph& b) { return a == b; });

    m.def("parse_bis_csv", [](const std::string& text) { return bis_to_graph(parse_bis_csv_text(text)); }, py::arg("text"),
          "Graph of one BIS claims table (debtor -> lender edges).");
    m.def(
        "load_snapshot_series",
        [](const std::filesystem::path& dir, unsigned threads) {
            std::vector<std::pair<std::string, WeightedDigraph>> out;
            for (const auto& s : load_snapshot_series(dir, threads)) out.emplace_back(s.period, s.graph);
            return out;
        },
        py::arg("directory"), py::arg("threads") = 1);

    m.def(
        "con_pair",
        [](const WeightedDigraph& g, const std::string& a, const std::string& b, const std::string& combiner) {
            return con_pair(g, g.id_of(a), g.id_of(b), {parse_combiner(combiner)});
        },
        py::arg("graph"), py::arg("a"), py::arg("b"), py::arg("combiner") = "min");
    m.def(
        "con_scores",
        [](const WeightedDigraph& g, const std::string& combiner, unsigned threads) {
            return by_label(g, con_all(g, {parse_combiner(combiner)}, threads));
        },
        py::arg("graph"), py::arg("combiner") = "min", py::arg("threads") = 1);
    m.def(
        "con_set",
        [](const WeightedDigraph& g, const std::vector<std::string>& labels, const std::string& combiner) {
            std::vector<NodeId> ids;
            for (const auto& l : labels) ids.push_back(g.id_of(l));
            return con_set(g, ids, {parse_combiner(combiner)});
        },
        py::arg("graph"), py::arg("nodes"), py::arg("combiner") = "min");
    m.def(
        "pagerank_reversed",
        [](const WeightedDigraph& g, double damping, double tolerance, std::uint32_t max_iterations) {
            const auto r = pagerank_reversed(g, {damping, tolerance, max_iterations});
            return std::make_tuple(by_label(g, r.scores), r.iterations, r.converged);
        },
        py::arg("graph"), py::arg("damping") = 0.85, py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 200,
        "Returns (scores by label, iterations, converged).");
    m.def(
        "unity_normalize", [](const std::vector<double>& v) { return unity_normalize(v); }, py::arg("scores"));
    m.def(
        "analyze_snapshot",
        [](const WeightedDigraph& g, const std::string& combiner, double damping, double tolerance, std::uint32_t max_iterations,
           double low_key, double highly_exposed) {
            return report_rows(analyze_snapshot(g, centrality_config(combiner, damping, tolerance, max_iterations, low_key, highly_exposed)));
        },
        py::arg("graph"), py::arg("combiner") = "min", py::arg("damping") = 0.85, py::arg("tolerance") = 1e-10,
        py::arg("max_iterations") = 200, py::arg("low_key") = 0.1, py::arg("highly_exposed") = -0.4,
        "One row per country with CON, PageRank, normalised scores, epsilon and leader class.");

    m.def(
        "louvain",
        [](const WeightedDigraph& g, std::uint64_t seed, double resolution) {
            LouvainConfig cfg;
            cfg.seed = seed;
            cfg.resolution = resolution;
            const auto r = louvain_detailed(g, cfg);
            std::map<std::string, std::uint32_t> assignment;
            for (NodeId u = 0; u < g.node_count(); ++u) assignment.emplace(g.label(u), r.partition.community_of(u));
            return std::make_pair(assignment, r.modularity);
        },
        py::arg("graph"), py::arg("seed") = 0, py::arg("resolution") = 1.0,
        "Returns (community id by label, modularity) on the symmetrised graph.");
    m.def(
        "modularity",
        [](const WeightedDigraph& g, const std::map<std::string, std::uint32_t>& assignment, double resolution) {
            std::vector<std::uint32_t> a(g.node_count());
            for (NodeId u = 0; u < g.node_count(); ++u) {
                const auto it = assignment.find(g.label(u));
                if (it == assignment.end()) throw Error(ErrorKind::KeyMismatch, "no community for '" + g.label(u) + "'");
                a[u] = it->second;
            }
            return modularity(symmetrize(g), Partition::from_assignment(a), resolution);
        },
        py::arg("graph"), py::arg("assignment"), py::arg("resolution") = 1.0);

    m.def(
        "simple_cycles",
        [](const WeightedDigraph& g, std::uint32_t min_len, std::uint32_t max_len) {
            std::vector<std::vector<std::string>> out;
            for (const auto& c : enumerate_cycles(g, min_len, max_len).cycles) {
                auto& ring = out.emplace_back();
                for (NodeId u : c.nodes) ring.push_back(g.label(u));
            }
            return out;
        },
        py::arg("graph"), py::arg("min_len") = 3, py::arg("max_len") = 8);
    m.def(
        "shortest_paths",
        [](const WeightedDigraph& g, std::uint32_t min_len, std::uint32_t max_len) {
            std::vector<std::vector<std::string>> out;
            for (const auto& p : enumerate_paths(g, min_len, max_len)) {
                auto& path = out.emplace_back();
                for (NodeId u : p.nodes) path.push_back(g.label(u));
            }
            return out;
        },
        py::arg("graph"), py::arg("min_len") = 4, py::arg("max_len") = 7);

    m.def(
        "aml_scan_json",
        [](const std::string& csv_text, bool header, int t0, double amount_threshold, std::uint32_t min_cycle,
           std::uint32_t max_cycle, std::uint32_t path_min, std::uint32_t path_max, std::size_t min_order, std::uint64_t seed,
           unsigned threads) {
            const auto edges = parse_transactions_text(csv_text, header);
            AmlConfig cfg;
            cfg.t0 = t0;
            cfg.amount_threshold = amount_threshold;
            cfg.min_cycle_len = min_cycle;
            cfg.max_cycle_len = max_cycle;
            cfg.path_len_min = path_min;
            cfg.path_len_max = path_max;
            cfg.min_community_order = min_order;
            LouvainConfig lcfg;
            lcfg.seed = seed;
            py::gil_scoped_release release;
            return aml_json(run_aml_pipeline(edges, lcfg, cfg, threads));
        },
        py::arg("csv_text"), py::arg("header") = false, py::arg("t0") = 1, py::arg("amount_threshold") = 10'000.0,
        py::arg("min_cycle") = 3, py::arg("max_cycle") = 8, py::arg("path_min") = 4, py::arg("path_max") = 7,
        py::arg("min_order") = 3, py::arg("seed") = 0, py::arg("threads") = 1,
        "Runs the transaction scan on source,target,n,k,y1,y2 rows and returns the JSON report.");
}
