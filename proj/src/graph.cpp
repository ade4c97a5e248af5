#include "banknet/graph.hpp"

#include "banknet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace banknet {

namespace {

std::string edge_text(const std::vector<std::string>& labels, const Edge& e) {
    return "(" + labels[e.source] + " -> " + labels[e.target] + ")";
}

} // namespace

WeightedDigraph WeightedDigraph::from_edges(std::vector<std::string> labels, std::vector<Edge> edges) {
    WeightedDigraph g;
    const std::size_t n = labels.size();
    g.index_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
        if (!g.index_.emplace(labels[i], i).second)
            throw Error(ErrorKind::DuplicateLabel, "label '" + labels[i] + "' appears twice");
    }
    g.labels_ = std::move(labels);

    for (const Edge& e : edges) {
        if (e.source >= n || e.target >= n)
            throw Error(ErrorKind::UnknownNode, "edge endpoint out of range");
        if (e.source == e.target)
            throw Error(ErrorKind::SelfLoop, "self-loop on '" + g.labels_[e.source] + "'");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw Error(ErrorKind::NonPositiveWeight, "weight of " + edge_text(g.labels_, e) + " must be positive");
    }

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    auto dup = std::adjacent_find(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source == b.source && a.target == b.target;
    });
    if (dup != edges.end())
        throw Error(ErrorKind::DuplicateEdge, "edge " + edge_text(g.labels_, *dup) + " given twice");

    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++g.out_offsets_[e.source + 1];
        ++g.in_offsets_[e.target + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

    g.out_arcs_.resize(edges.size());
    g.in_arcs_.resize(edges.size());
    std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    // Edges are sorted by source, so in-lists come out sorted by source too.
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        g.out_arcs_[i] = {e.target, e.weight};
        g.in_arcs_[in_fill[e.target]++] = {e.source, e.weight};
    }
    return g;
}

std::optional<double> WeightedDigraph::weight(NodeId u, NodeId v) const noexcept {
    if (u >= node_count() || v >= node_count()) return std::nullopt;
    auto arcs = out_arcs(u);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), v, [](const Arc& a, NodeId x) { return a.node < x; });
    if (it == arcs.end() || it->node != v) return std::nullopt;
    return it->weight;
}

double WeightedDigraph::out_weight(NodeId u) const noexcept {
    double s = 0.0;
    for (const Arc& a : out_arcs(u)) s += a.weight;
    return s;
}

double WeightedDigraph::in_weight(NodeId u) const noexcept {
    double s = 0.0;
    for (const Arc& a : in_arcs(u)) s += a.weight;
    return s;
}

double WeightedDigraph::total_weight() const noexcept {
    double s = 0.0;
    for (const Arc& a : out_arcs_) s += a.weight;
    return s;
}

std::optional<NodeId> WeightedDigraph::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId WeightedDigraph::id_of(std::string_view label) const {
    if (auto id = find(label)) return *id;
    throw Error(ErrorKind::UnknownNode, "no node labelled '" + std::string(label) + "'");
}

std::vector<Edge> WeightedDigraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for_each_edge([&](NodeId u, NodeId v, double w) { out.push_back({u, v, w}); });
    return out;
}

bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
    return a.labels_ == b.labels_ && a.edges() == b.edges();
}

WeightedDigraph build_graph(std::span<const LabeledEdge> triples) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> seen;
    auto intern = [&](const std::string& s) {
        auto [it, inserted] = seen.emplace(s, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(s);
        return it->second;
    };
    std::vector<Edge> edges;
    edges.reserve(triples.size());
    for (const LabeledEdge& t : triples) {
        const NodeId u = intern(t.source);
        const NodeId v = intern(t.target);
        edges.push_back({u, v, t.weight});
    }
    return WeightedDigraph::from_edges(std::move(labels), std::move(edges));
}

WeightedDigraph build_graph(std::vector<std::string> universe, std::span<const LabeledEdge> triples) {
    std::unordered_map<std::string, NodeId> index;
    index.reserve(universe.size());
    for (NodeId i = 0; i < universe.size(); ++i) index.emplace(universe[i], i);
    auto lookup = [&](const std::string& s) {
        auto it = index.find(s);
        if (it == index.end()) throw Error(ErrorKind::UnknownNode, "label '" + s + "' not in universe");
        return it->second;
    };
    std::vector<Edge> edges;
    edges.reserve(triples.size());
    for (const LabeledEdge& t : triples) edges.push_back({lookup(t.source), lookup(t.target), t.weight});
    return WeightedDigraph::from_edges(std::move(universe), std::move(edges));
}

WeightedDigraph reverse(const WeightedDigraph& g) {
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    g.for_each_edge([&](NodeId u, NodeId v, double w) { edges.push_back({v, u, w}); });
    return WeightedDigraph::from_edges({g.labels().begin(), g.labels().end()}, std::move(edges));
}

namespace {

WeightedDigraph remap(const WeightedDigraph& g, const std::vector<char>& keep_node,
                      const std::vector<Edge>& kept, std::vector<NodeId>* origin) {
    constexpr NodeId none = static_cast<NodeId>(-1);
    std::vector<NodeId> local(g.node_count(), none);
    std::vector<std::string> labels;
    std::vector<NodeId> parents;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (!keep_node[u]) continue;
        local[u] = static_cast<NodeId>(labels.size());
        labels.push_back(g.label(u));
        parents.push_back(u);
    }
    std::vector<Edge> edges;
    edges.reserve(kept.size());
    for (const Edge& e : kept) edges.push_back({local[e.source], local[e.target], e.weight});
    if (origin) *origin = std::move(parents);
    return WeightedDigraph::from_edges(std::move(labels), std::move(edges));
}

} // namespace

WeightedDigraph induce_by_edges(const WeightedDigraph& g, const EdgePredicate& keep, std::vector<NodeId>* origin) {
    std::vector<char> keep_node(g.node_count(), 0);
    std::vector<Edge> kept;
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
        const Edge e{u, v, w};
        if (!keep(e)) return;
        keep_node[u] = keep_node[v] = 1;
        kept.push_back(e);
    });
    return remap(g, keep_node, kept, origin);
}

WeightedDigraph induce_by_nodes(const WeightedDigraph& g, std::span<const NodeId> nodes, std::vector<NodeId>* origin) {
    std::vector<char> keep_node(g.node_count(), 0);
    for (NodeId u : nodes) {
        if (u >= g.node_count()) throw Error(ErrorKind::UnknownNode, "node id " + std::to_string(u) + " out of range");
        keep_node[u] = 1;
    }
    std::vector<Edge> kept;
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
        if (keep_node[u] && keep_node[v]) kept.push_back({u, v, w});
    });
    return remap(g, keep_node, kept, origin);
}

SnapshotSeries::SnapshotSeries(std::vector<Snapshot> snapshots) : snapshots_(std::move(snapshots)) {
    for (std::size_t i = 1; i < snapshots_.size(); ++i) {
        const auto& prev = snapshots_[i - 1];
        const auto& cur = snapshots_[i];
        if (prev.period == cur.period)
            throw Error(ErrorKind::DuplicatePeriod, "period '" + cur.period + "' appears twice");
        if (!(prev.period < cur.period))
            throw Error(ErrorKind::InvalidConfig, "periods out of order: '" + prev.period + "' before '" + cur.period + "'");
        if (!std::ranges::equal(prev.graph.labels(), cur.graph.labels()))
            throw Error(ErrorKind::InvalidConfig, "snapshot '" + cur.period + "' has a different label universe");
    }
}

} // namespace banknet
