#pragma once

// Louvain community detection on the symmetrised transaction graph.

#include "banknet/graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace banknet {

/// Weighted undirected graph in CSR form. Every edge {u,v} appears in both
/// adjacency lists. self_weight(u) is the diagonal entry A_uu, which only
/// arises for aggregated community nodes.
class UndirectedGraph {
public:
    struct Link {
        NodeId u = 0;
        NodeId v = 0;
        double weight = 0.0;
    };

    UndirectedGraph() = default;
    /// Repeated {u,v} links are summed; u == v contributes to self_weight.
    UndirectedGraph(std::size_t n, std::span<const Link> links);

    [[nodiscard]] std::size_t node_count() const noexcept { return self_.size(); }
    [[nodiscard]] std::span<const Arc> neighbors(NodeId u) const noexcept {
        return {arcs_.data() + offsets_[u], arcs_.data() + offsets_[u + 1]};
    }
    [[nodiscard]] double self_weight(NodeId u) const noexcept { return self_[u]; }
    /// k_u = sum_j A_uj, self entry included.
    [[nodiscard]] double degree(NodeId u) const noexcept { return degree_[u]; }
    /// m = (sum_u k_u) / 2.
    [[nodiscard]] double total_weight() const noexcept { return total_; }
    /// Off-diagonal links with u < v, sorted.
    [[nodiscard]] std::vector<Link> links() const;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<Arc> arcs_;
    std::vector<double> self_;
    std::vector<double> degree_;
    double total_ = 0.0;
};

/// Undirected weight(u,v) = weight(u,v) + weight(v,u).
UndirectedGraph symmetrize(const WeightedDigraph& g);

/// Disjoint cover of the node set with contiguous community ids.
class Partition {
public:
    Partition() = default;
    /// Renumbers ids to 0..k-1 in order of first appearance by node id.
    static Partition from_assignment(std::vector<std::uint32_t> assignment);
    static Partition singletons(std::size_t n);

    [[nodiscard]] std::size_t node_count() const noexcept { return assignment_.size(); }
    [[nodiscard]] std::size_t community_count() const noexcept { return count_; }
    [[nodiscard]] std::uint32_t community_of(NodeId u) const { return assignment_.at(u); }
    [[nodiscard]] std::span<const std::uint32_t> assignment() const noexcept { return assignment_; }
    /// Members of each community in increasing node id.
    [[nodiscard]] std::vector<std::vector<NodeId>> communities() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::uint32_t> assignment_;
    std::size_t count_ = 0;
};

/// Newman-Girvan modularity with resolution gamma. Throws EmptyGraph when
/// the graph has no weight and InvalidConfig when the partition size differs.
double modularity(const UndirectedGraph& g, const Partition& p, double resolution = 1.0);

struct LouvainConfig {
    double resolution = 1.0;
    std::uint64_t seed = 0;
    std::uint32_t max_passes = 50;
    double min_modularity_gain = 1e-7;

    void validate() const;
};

struct LouvainResult {
    Partition partition;
    double modularity = 0.0; // 0 for graphs without edges
    std::uint32_t passes = 0;
};

LouvainResult louvain_detailed(const WeightedDigraph& g, const LouvainConfig& cfg = {});
LouvainResult louvain_detailed(const UndirectedGraph& g, const LouvainConfig& cfg = {});
Partition louvain(const WeightedDigraph& g, const LouvainConfig& cfg = {});

struct FilteredPartition {
    /// Retained communities in original id order, renumbered 0..k'-1.
    std::vector<std::vector<NodeId>> communities;
    /// Nodes whose community was too small, increasing id.
    std::vector<NodeId> dropped;
};

FilteredPartition filter_min_order(const Partition& p, std::size_t min_order = 3);

} // namespace banknet
