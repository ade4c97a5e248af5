#pragma once

// Immutable weighted directed graph with dense node ids and a label
// dictionary. Edge weights are money amounts and must be strictly positive;
// self-loops and parallel edges are rejected at construction.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace banknet {

using NodeId = std::uint32_t;

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge given by endpoint labels, as read from an input file.
struct LabeledEdge {
    std::string source;
    std::string target;
    double weight = 0.0;
};

/// One adjacency entry: the neighbour and the weight of the connecting edge.
struct Arc {
    NodeId node = 0;
    double weight = 0.0;
};

class WeightedDigraph {
public:
    WeightedDigraph() = default;

    /// Builds a graph over the given label universe. Edges may arrive in any
    /// order; adjacency lists are sorted by neighbour id.
    static WeightedDigraph from_edges(std::vector<std::string> labels, std::vector<Edge> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return out_arcs_.size(); }

    [[nodiscard]] std::span<const Arc> out_arcs(NodeId u) const noexcept {
        return {out_arcs_.data() + out_offsets_[u], out_arcs_.data() + out_offsets_[u + 1]};
    }
    [[nodiscard]] std::span<const Arc> in_arcs(NodeId u) const noexcept {
        return {in_arcs_.data() + in_offsets_[u], in_arcs_.data() + in_offsets_[u + 1]};
    }
    [[nodiscard]] std::size_t out_degree(NodeId u) const noexcept { return out_arcs(u).size(); }
    [[nodiscard]] std::size_t in_degree(NodeId u) const noexcept { return in_arcs(u).size(); }

    [[nodiscard]] std::optional<double> weight(NodeId u, NodeId v) const noexcept;
    [[nodiscard]] double out_weight(NodeId u) const noexcept;
    [[nodiscard]] double in_weight(NodeId u) const noexcept;
    [[nodiscard]] double total_weight() const noexcept;

    [[nodiscard]] const std::string& label(NodeId u) const { return labels_.at(u); }
    [[nodiscard]] std::span<const std::string> labels() const noexcept { return labels_; }
    [[nodiscard]] std::optional<NodeId> find(std::string_view label) const;
    /// Like find() but throws UnknownNode.
    [[nodiscard]] NodeId id_of(std::string_view label) const;

    /// All edges ordered by (source, target).
    [[nodiscard]] std::vector<Edge> edges() const;

    template <class F>
    void for_each_edge(F&& fn) const {
        for (NodeId u = 0; u < node_count(); ++u)
            for (const Arc& a : out_arcs(u)) fn(u, a.node, a.weight);
    }

    friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b);

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<Arc> out_arcs_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<Arc> in_arcs_;
};

/// Labels are numbered in order of first appearance.
WeightedDigraph build_graph(std::span<const LabeledEdge> triples);

/// Builds over a fixed label universe; nodes without edges stay isolated.
WeightedDigraph build_graph(std::vector<std::string> universe, std::span<const LabeledEdge> triples);

WeightedDigraph reverse(const WeightedDigraph& g);

using EdgePredicate = std::function<bool(const Edge&)>;

/// Keeps exactly the edges satisfying keep. The node set shrinks to the
/// endpoints of kept edges (original relative order and labels preserved).
/// When origin is non-null it receives the parent id of every output node.
WeightedDigraph induce_by_edges(const WeightedDigraph& g, const EdgePredicate& keep,
                                std::vector<NodeId>* origin = nullptr);

/// Subgraph on the given node set (duplicates ignored), ordered by parent id.
WeightedDigraph induce_by_nodes(const WeightedDigraph& g, std::span<const NodeId> nodes,
                                std::vector<NodeId>* origin = nullptr);

struct Snapshot {
    std::string period;
    WeightedDigraph graph;
};

/// Time-ordered snapshots over a shared label universe.
class SnapshotSeries {
public:
    SnapshotSeries() = default;
    /// Throws DuplicatePeriod / InvalidConfig when periods are not strictly
    /// increasing or the label universes differ.
    explicit SnapshotSeries(std::vector<Snapshot> snapshots);

    [[nodiscard]] std::size_t size() const noexcept { return snapshots_.size(); }
    [[nodiscard]] bool empty() const noexcept { return snapshots_.empty(); }
    [[nodiscard]] const Snapshot& operator[](std::size_t i) const { return snapshots_[i]; }
    [[nodiscard]] auto begin() const noexcept { return snapshots_.begin(); }
    [[nodiscard]] auto end() const noexcept { return snapshots_.end(); }

private:
    std::vector<Snapshot> snapshots_;
};

} // namespace banknet
