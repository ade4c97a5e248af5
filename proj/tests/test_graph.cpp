#include "banknet/error.hpp"
#include "banknet/graph.hpp"
#include "banknet/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

using namespace banknet;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected banknet::Error");
    return ErrorKind::Io;
}

std::set<std::tuple<std::string, std::string, double>> labeled_edges(const WeightedDigraph& g) {
    std::set<std::tuple<std::string, std::string, double>> out;
    g.for_each_edge([&](NodeId u, NodeId v, double w) { out.emplace(g.label(u), g.label(v), w); });
    return out;
}

} // namespace

TEST_CASE("build_graph on a single triple") {
    const std::vector<LabeledEdge> t{{"A", "B", 5}};
    const auto g = build_graph(t);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.weight(g.id_of("A"), g.id_of("B")) == 5.0);
    CHECK_FALSE(g.weight(g.id_of("B"), g.id_of("A")).has_value());
}

TEST_CASE("build_graph rejects invariant violations") {
    CHECK(kind_of([] { build_graph(std::vector<LabeledEdge>{{"A", "B", 5}, {"A", "B", 3}}); }) == ErrorKind::DuplicateEdge);
    CHECK(kind_of([] { build_graph(std::vector<LabeledEdge>{{"A", "A", 1}}); }) == ErrorKind::SelfLoop);
    CHECK(kind_of([] { build_graph(std::vector<LabeledEdge>{{"A", "B", 0}}); }) == ErrorKind::NonPositiveWeight);
    CHECK(kind_of([] { build_graph(std::vector<LabeledEdge>{{"A", "B", -2}}); }) == ErrorKind::NonPositiveWeight);
    CHECK(kind_of([] { build_graph({"A"}, std::vector<LabeledEdge>{{"A", "Z", 1}}); }) == ErrorKind::UnknownNode);
    CHECK(kind_of([] { WeightedDigraph::from_edges({"A", "A"}, {}); }) == ErrorKind::DuplicateLabel);
}

TEST_CASE("a fixed universe keeps isolated nodes") {
    const auto g = build_graph({"A", "B", "C"}, std::vector<LabeledEdge>{{"A", "B", 1}});
    CHECK(g.node_count() == 3);
    CHECK(g.out_degree(g.id_of("C")) == 0);
    CHECK(g.in_degree(g.id_of("C")) == 0);
}

TEST_CASE("adjacency lists are sorted and weights aggregate") {
    const auto g = build_graph(std::vector<LabeledEdge>{{"a", "d", 4}, {"a", "b", 1}, {"c", "a", 2}, {"a", "c", 3}});
    const auto a = g.id_of("a");
    std::vector<NodeId> out;
    for (const Arc& arc : g.out_arcs(a)) out.push_back(arc.node);
    CHECK(std::is_sorted(out.begin(), out.end()));
    CHECK(g.out_weight(a) == 8.0);
    CHECK(g.in_weight(a) == 2.0);
    CHECK(g.total_weight() == 10.0);
}

TEST_CASE("reverse") {
    SUBCASE("empty") {
        const WeightedDigraph empty = build_graph(std::vector<LabeledEdge>{});
        CHECK(reverse(empty).node_count() == 0);
        CHECK(reverse(empty).edge_count() == 0);
    }
    SUBCASE("single edge flips") {
        const auto g = reverse(build_graph(std::vector<LabeledEdge>{{"A", "B", 5}}));
        CHECK(labeled_edges(g) == std::set<std::tuple<std::string, std::string, double>>{{"B", "A", 5.0}});
    }
    SUBCASE("involution and weight preservation on random graphs") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 20; ++i) {
            const auto g = oracle::random_digraph(rng, 50, 0.1);
            const auto r = reverse(g);
            CHECK(r.edge_count() == g.edge_count());
            CHECK(r.total_weight() == doctest::Approx(g.total_weight()).epsilon(1e-12));
            g.for_each_edge([&](NodeId u, NodeId v, double w) { CHECK(r.weight(v, u) == w); });
            CHECK(reverse(r) == g);
        }
    }
}

TEST_CASE("induce_by_edges") {
    const auto g = build_graph(std::vector<LabeledEdge>{{"A", "B", 5}, {"B", "C", 20}});
    CHECK(induce_by_edges(g, [](const Edge&) { return true; }) == g);
    const auto none = induce_by_edges(g, [](const Edge&) { return false; });
    CHECK(none.node_count() == 0);
    CHECK(none.edge_count() == 0);

    std::vector<NodeId> origin;
    const auto small = induce_by_edges(g, [](const Edge& e) { return e.weight < 10; }, &origin);
    CHECK(labeled_edges(small) == std::set<std::tuple<std::string, std::string, double>>{{"A", "B", 5.0}});
    CHECK(small.node_count() == 2);
    CHECK(origin == std::vector<NodeId>{g.id_of("A"), g.id_of("B")});
}

TEST_CASE("induce_by_nodes") {
    const auto g = build_graph(std::vector<LabeledEdge>{{"A", "B", 1}, {"B", "C", 2}});
    const std::vector<NodeId> all{0, 1, 2};
    CHECK(induce_by_nodes(g, all) == g);
    CHECK(induce_by_nodes(g, std::vector<NodeId>{}).node_count() == 0);
    const std::vector<NodeId> ab{g.id_of("A"), g.id_of("B")};
    CHECK(labeled_edges(induce_by_nodes(g, ab)) == std::set<std::tuple<std::string, std::string, double>>{{"A", "B", 1.0}});
    CHECK(kind_of([&] { induce_by_nodes(g, std::vector<NodeId>{7}); }) == ErrorKind::UnknownNode);

    std::mt19937_64 rng(3);
    const auto big = oracle::random_digraph(rng, 40, 0.2);
    std::vector<NodeId> subset;
    for (NodeId u = 0; u < 40; u += 3) subset.push_back(u);
    std::vector<NodeId> origin;
    const auto sub = induce_by_nodes(big, subset, &origin);
    CHECK(sub.edge_count() <= big.edge_count());
    CHECK(origin == subset);
    sub.for_each_edge([&](NodeId u, NodeId v, double w) { CHECK(big.weight(origin[u], origin[v]) == w); });
}

TEST_CASE("build then enumerate round-trips the triple set") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 10; ++round) {
        std::vector<LabeledEdge> triples;
        std::set<std::tuple<std::string, std::string, double>> expected;
        for (int u = 0; u < 15; ++u)
            for (int v = 0; v < 15; ++v)
                if (u != v && oracle::unit(rng) < 0.2) {
                    const double w = 1 + oracle::unit(rng) * 99;
                    triples.push_back({"x" + std::to_string(u), "x" + std::to_string(v), w});
                    expected.emplace(triples.back().source, triples.back().target, w);
                }
        std::shuffle(triples.begin(), triples.end(), rng);
        CHECK(labeled_edges(build_graph(triples)) == expected);
    }
}

TEST_CASE("snapshot series ordering") {
    const auto g = build_graph({"A", "B"}, std::vector<LabeledEdge>{});
    const auto h = build_graph({"A", "C"}, std::vector<LabeledEdge>{});
    CHECK_NOTHROW(SnapshotSeries({{"2006-03", g}, {"2006-06", g}}));
    CHECK(kind_of([&] { SnapshotSeries({{"2006-03", g}, {"2006-03", g}}); }) == ErrorKind::DuplicatePeriod);
    CHECK(kind_of([&] { SnapshotSeries({{"2006-06", g}, {"2006-03", g}}); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { SnapshotSeries({{"2006-03", g}, {"2006-06", h}}); }) == ErrorKind::InvalidConfig);
}
