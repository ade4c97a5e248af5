#pragma once

// Sub-threshold transaction pattern detection: period and amount filters,
// length-bounded simple-cycle enumeration, long shortest paths and the
// per-community R-value |P ∩ C| / |P|.

#include "banknet/community.hpp"
#include "banknet/graph.hpp"
#include "banknet/ingest.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace banknet {

struct AmlConfig {
    int t0 = 1;                        // keep edges with end_year - start_year < t0
    double amount_threshold = 10'000;  // keep edges with amount / count < threshold
    std::uint32_t min_cycle_len = 3;
    std::uint32_t max_cycle_len = 8;
    std::uint32_t path_len_min = 4;
    std::uint32_t path_len_max = 7;
    std::size_t min_community_order = 3;

    void validate() const;
};

std::vector<TransactionEdge> filter_period(std::span<const TransactionEdge> edges, int t0);
std::vector<TransactionEdge> filter_amount(std::span<const TransactionEdge> edges, double threshold);

struct CycleRecord {
    std::uint32_t community = 0;
    std::vector<NodeId> nodes; // starts at the smallest id; closes back to nodes.front()

    [[nodiscard]] std::size_t length() const noexcept { return nodes.size(); }
    friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

struct CycleEnumeration {
    std::vector<CycleRecord> cycles;
    /// True when some branch that could still return to its start was cut
    /// because it would exceed max_len.
    bool length_cap_pruned = false;
};

/// Every simple directed cycle with min_len <= length <= max_len, once each,
/// ordered by (start node, DFS order over increasing neighbour ids).
CycleEnumeration enumerate_cycles(const WeightedDigraph& g, std::uint32_t min_len, std::uint32_t max_len,
                                  std::uint32_t community = 0);

struct PathRecord {
    std::uint32_t community = 0;
    NodeId source = 0;
    NodeId target = 0;
    std::vector<NodeId> nodes; // source .. target

    [[nodiscard]] std::size_t length() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

/// One shortest path per ordered pair whose BFS distance lies in [a, b].
/// Among equally short predecessors the smallest node id is taken.
std::vector<PathRecord> enumerate_paths(const WeightedDigraph& g, std::uint32_t a, std::uint32_t b,
                                        std::uint32_t community = 0);

struct PathSummary {
    std::uint64_t path_count = 0;              // ordered pairs at distance in [a, b]
    std::uint64_t all_shortest_path_count = 0; // every shortest path of those pairs (saturating)
    std::vector<NodeId> path_nodes;            // nodes on a representative path, sorted
};

/// Same paths as enumerate_paths without materialising them.
PathSummary summarize_paths(const WeightedDigraph& g, std::uint32_t a, std::uint32_t b);

/// |P ∩ C| / |P|; nullopt when P is empty. Inputs are sorted id lists.
std::optional<double> r_value(std::span<const NodeId> path_nodes, std::span<const NodeId> cycle_nodes);

struct CommunityFinding {
    std::uint32_t id = 0; // index among retained communities
    std::size_t size = 0;
    std::size_t filtered_edge_count = 0;
    std::vector<std::vector<NodeId>> cycles; // account ids
    bool length_cap_pruned = false;
    std::uint64_t path_count = 0;
    std::uint64_t all_shortest_path_count = 0;
    std::size_t path_node_count = 0;
    std::size_t cycle_node_count = 0;
    std::size_t overlap_count = 0;
    std::optional<double> r_value;
};

/// Global counters in pipeline order.
struct AmlSummary {
    std::size_t accounts = 0;
    std::size_t edges = 0;
    std::size_t zero_amount_edges_ignored = 0;
    std::size_t louvain_communities = 0;
    double louvain_modularity = 0.0;
    std::size_t communities = 0; // after the minimum-order filter
    double average_community_size = 0.0;
    std::size_t largest_community = 0;
    std::size_t dropped_accounts = 0;
    std::size_t community_edges = 0;
    std::size_t period_filtered_edges = 0;
    std::size_t amount_filtered_edges = 0;
    std::size_t cycles = 0;
    std::size_t cycle_communities = 0;
    std::size_t cycle_accounts = 0;
    std::map<std::size_t, std::size_t> cycles_by_length;
    std::size_t length_capped_communities = 0;
    std::uint64_t paths = 0;
    std::uint64_t all_shortest_paths = 0;
    std::size_t path_accounts = 0;
    std::size_t path_cycle_overlap_accounts = 0;
    std::optional<double> global_r_value;
};

struct AmlReport {
    std::vector<std::string> accounts; // label of every account id
    Partition partition;               // Louvain output over all accounts
    AmlSummary summary;
    std::vector<CommunityFinding> communities; // only communities with a cycle
    std::vector<NodeId> flagged_accounts;      // union of cycle members, sorted
};

/// Runs community detection, the minimum-order filter, both edge filters,
/// cycle enumeration, path analysis and R-values. Zero-amount pairs are left
/// out of every step. Communities are processed on up to `threads` workers;
/// output does not depend on the thread count.
AmlReport run_aml_pipeline(std::span<const TransactionEdge> edges, const LouvainConfig& louvain_cfg = {},
                           const AmlConfig& cfg = {}, unsigned threads = 1);

} // namespace banknet
