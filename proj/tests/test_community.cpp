#include "banknet/community.hpp"
#include "banknet/error.hpp"
#include "banknet/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

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

WeightedDigraph graph(std::vector<LabeledEdge> edges) { return build_graph(edges); }

// Two directed 5-cliques (both directions, unit weight) joined by one edge.
WeightedDigraph two_cliques() {
    std::vector<LabeledEdge> e;
    for (int base : {0, 5})
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) e.push_back({std::to_string(base + i), std::to_string(base + j), 1});
    e.push_back({"4", "5", 1});
    std::vector<std::string> labels;
    for (int i = 0; i < 10; ++i) labels.push_back(std::to_string(i));
    return build_graph(labels, e);
}

} // namespace

TEST_CASE("symmetrize") {
    const auto both = symmetrize(graph({{"A", "B", 3}, {"B", "A", 2}}));
    REQUIRE(both.links().size() == 1);
    CHECK(both.links()[0].weight == 5.0);

    const auto one = symmetrize(graph({{"A", "B", 3}}));
    REQUIRE(one.links().size() == 1);
    CHECK(one.links()[0].weight == 3.0);

    CHECK(symmetrize(WeightedDigraph{}).node_count() == 0);

    std::mt19937_64 rng(2);
    for (int i = 0; i < 10; ++i) {
        const auto g = oracle::random_digraph(rng, 25, 0.2);
        const auto u = symmetrize(g);
        CHECK(u.total_weight() == doctest::Approx(g.total_weight()).epsilon(1e-12));
        for (NodeId v = 0; v < u.node_count(); ++v) CHECK(u.self_weight(v) == 0.0);
    }
}

TEST_CASE("modularity closed forms") {
    SUBCASE("singleton partition with every edge crossing is negative") {
        const auto u = symmetrize(graph({{"a", "b", 1}, {"b", "c", 2}, {"c", "a", 1}}));
        const double q = modularity(u, Partition::singletons(3));
        CHECK(q < 0.0);
        // -sum (k_i / 2m)^2
        double expected = 0.0;
        for (NodeId v = 0; v < 3; ++v) expected -= std::pow(u.degree(v) / (2 * u.total_weight()), 2);
        CHECK(q == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("two disjoint triangles") {
        const auto u = symmetrize(graph({{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}, {"x", "y", 1}, {"y", "z", 1}, {"z", "x", 1}}));
        const auto p = Partition::from_assignment({0, 0, 0, 1, 1, 1});
        // each triangle: 6/12 - (6/12)^2 = 0.25
        CHECK(modularity(u, p) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(oracle::modularity(u, {0, 0, 0, 1, 1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("single community") {
        std::mt19937_64 rng(17);
        const auto u = symmetrize(oracle::random_digraph(rng, 12, 0.3));
        const auto p = Partition::from_assignment(std::vector<std::uint32_t>(12, 0));
        // 1 - (sum_i k_i / 2m)^2, which is 0
        double k = 0.0;
        for (NodeId v = 0; v < 12; ++v) k += u.degree(v);
        const double closed = 1.0 - std::pow(k / (2 * u.total_weight()), 2);
        CHECK(std::abs(modularity(u, p) - closed) <= 1e-12);
        CHECK(std::abs(oracle::modularity(u, std::vector<std::uint32_t>(12, 0)) - closed) <= 1e-12);
    }
    SUBCASE("errors") {
        const auto empty = symmetrize(build_graph({"a", "b"}, std::vector<LabeledEdge>{}));
        CHECK(kind_of([&] { modularity(empty, Partition::singletons(2)); }) == ErrorKind::EmptyGraph);
        const auto u = symmetrize(graph({{"a", "b", 1}}));
        CHECK(kind_of([&] { modularity(u, Partition::singletons(3)); }) == ErrorKind::InvalidConfig);
    }
}

TEST_CASE("modularity matches the dense double sum, including aggregated self-loops") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 30; ++i) {
        const auto d = oracle::random_digraph(rng, 10, 0.3);
        std::vector<UndirectedGraph::Link> links;
        for (const auto& l : symmetrize(d).links()) links.push_back(l);
        links.push_back({2, 2, 3.5});
        const UndirectedGraph u(10, links);
        if (!(u.total_weight() > 0)) continue;
        std::vector<std::uint32_t> a(10);
        for (auto& c : a) c = static_cast<std::uint32_t>(rng() % 3);
        const auto p = Partition::from_assignment(a);
        CHECK(std::abs(modularity(u, p, 0.7) - oracle::modularity(u, {p.assignment().begin(), p.assignment().end()}, 0.7)) <= 1e-12);
    }
}

TEST_CASE("Partition renumbering") {
    const auto p = Partition::from_assignment({7, 3, 7, 9});
    CHECK(std::vector<std::uint32_t>(p.assignment().begin(), p.assignment().end()) == std::vector<std::uint32_t>{0, 1, 0, 2});
    CHECK(p.community_count() == 3);
    CHECK(p.communities() == std::vector<std::vector<NodeId>>{{0, 2}, {1}, {3}});
}

TEST_CASE("louvain separates two bridged cliques at the exhaustive optimum") {
    const auto g = two_cliques();
    const auto u = symmetrize(g);
    const double best = oracle::best_modularity(u);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = louvain_detailed(g, {.seed = seed});
        CHECK(r.partition.community_count() == 2);
        for (NodeId v = 0; v < 10; ++v) CHECK(r.partition.community_of(v) == (v < 5 ? 0u : 1u));
        CHECK(std::abs(r.modularity - best) <= 1e-12);
    }
}

TEST_CASE("louvain small cases") {
    const auto edgeless = build_graph({"a", "b", "c"}, std::vector<LabeledEdge>{});
    CHECK(louvain(edgeless).community_count() == 3);

    const auto tri = graph({{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}});
    const auto p = louvain(tri);
    CHECK(p.community_count() == 1);
    // all five partitions of three nodes: the triangle together is the best
    const auto u = symmetrize(tri);
    CHECK(modularity(u, p) == doctest::Approx(oracle::best_modularity(u)).epsilon(1e-15));
}

TEST_CASE("louvain invariants on random graphs") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
        const auto g = oracle::random_digraph(rng, 5 + rng() % 60, 0.08);
        const auto u = symmetrize(g);
        const LouvainConfig cfg{.seed = rng()};
        const auto r = louvain_detailed(g, cfg);
        CHECK(r.partition.node_count() == g.node_count());
        CHECK(r.passes <= cfg.max_passes);
        std::vector<int> seen(g.node_count(), 0);
        for (const auto& c : r.partition.communities())
            for (NodeId v : c) ++seen[v];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
        if (u.total_weight() > 0) {
            CHECK(r.modularity >= modularity(u, Partition::singletons(g.node_count())));
            CHECK(r.modularity == doctest::Approx(modularity(u, r.partition)).epsilon(1e-12));
        }
        CHECK(louvain_detailed(g, cfg).partition == r.partition);
    }
}

TEST_CASE("louvain finds planted blocks in a larger graph") {
    // 20 blocks of 15 nodes, dense inside, a few cross edges.
    std::mt19937_64 rng(123);
    std::vector<Edge> edges;
    const int blocks = 20, size = 15;
    for (int b = 0; b < blocks; ++b)
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                if (i != j && oracle::unit(rng) < 0.4) edges.push_back({NodeId(b * size + i), NodeId(b * size + j), 1});
    for (int k = 0; k < 30; ++k) {
        const auto a = NodeId(rng() % (blocks * size)), b = NodeId(rng() % (blocks * size));
        if (a / size != b / size) edges.push_back({a, b, 1});
    }
    std::sort(edges.begin(), edges.end(), [](auto& x, auto& y) { return std::tie(x.source, x.target) < std::tie(y.source, y.target); });
    edges.erase(std::unique(edges.begin(), edges.end(), [](auto& x, auto& y) { return x.source == y.source && x.target == y.target; }), edges.end());
    std::vector<std::string> labels;
    for (int i = 0; i < blocks * size; ++i) labels.push_back(std::to_string(i));
    const auto g = WeightedDigraph::from_edges(labels, edges);
    const auto p = louvain(g, {.seed = 9});
    CHECK(p.community_count() == blocks);
    for (int b = 0; b < blocks; ++b)
        for (int i = 1; i < size; ++i) CHECK(p.community_of(b * size + i) == p.community_of(b * size));
}

TEST_CASE("filter_min_order") {
    // sizes 2, 3, 5
    const auto p = Partition::from_assignment({0, 0, 1, 1, 1, 2, 2, 2, 2, 2});
    const auto f = filter_min_order(p, 3);
    REQUIRE(f.communities.size() == 2);
    CHECK(f.communities[0].size() == 3);
    CHECK(f.communities[1].size() == 5);
    CHECK(f.dropped == std::vector<NodeId>{0, 1});

    CHECK(filter_min_order(p, 1).communities == p.communities());
    CHECK(filter_min_order(Partition::from_assignment({0, 0, 1, 1}), 3).communities.empty());
    CHECK(kind_of([&] { filter_min_order(p, 0); }) == ErrorKind::InvalidConfig);
}
