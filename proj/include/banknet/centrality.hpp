#pragma once

// Adversarial-network centralities: common out-neighbour (CON) scores,
// PageRank on the edge-reversed graph, unity-based normalisation and the
// low-key leader strength epsilon = CON_norm - PR_norm.

#include "banknet/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace banknet {

/// How the two edge weights into a shared out-neighbour are combined.
enum class ConCombiner { Min, Product, Sum };

std::string_view to_string(ConCombiner c) noexcept;
/// Accepts "min", "product", "sum"; throws InvalidConfig otherwise.
ConCombiner parse_combiner(std::string_view name);

struct ConConfig {
    ConCombiner combiner = ConCombiner::Min;
};

struct PageRankConfig {
    double damping = 0.85;
    double tolerance = 1e-10; // L1 change between iterations
    std::uint32_t max_iterations = 200;

    void validate() const;
};

struct PageRankResult {
    std::vector<double> scores;
    std::uint32_t iterations = 0;
    /// False when max_iterations was reached first; scores are still usable.
    bool converged = true;
};

enum class LeaderClass { LowKey, HighlyExposed, Neither };

std::string_view to_string(LeaderClass c) noexcept;

struct LeaderThresholds {
    double low_key = 0.1;         // epsilon > low_key  => LowKey
    double highly_exposed = -0.4; // epsilon < highly_exposed => HighlyExposed

    void validate() const;
};

struct NodeScores {
    double con = 0.0;
    double pagerank = 0.0;
    double con_norm = 0.0;
    double pr_norm = 0.0;
    double epsilon = 0.0;
    LeaderClass leader_class = LeaderClass::Neither;

    friend bool operator==(const NodeScores&, const NodeScores&) = default;
};

struct CentralityReport {
    std::vector<std::string> labels;
    std::vector<NodeScores> nodes; // indexed by NodeId
    std::uint32_t pagerank_iterations = 0;
    bool pagerank_converged = true;

    friend bool operator==(const CentralityReport&, const CentralityReport&) = default;
};

struct CentralityConfig {
    ConConfig con;
    PageRankConfig pagerank;
    LeaderThresholds thresholds;
};

/// Sum over common out-neighbours w of combiner(weight(u,w), weight(v,w)).
double con_pair(const WeightedDigraph& g, NodeId u, NodeId v, const ConConfig& cfg = {});

/// Sum of con_pair(u, v) over v != u, accumulated in increasing v.
double con_node(const WeightedDigraph& g, NodeId u, const ConConfig& cfg = {});

/// con_node for every node.
std::vector<double> con_all(const WeightedDigraph& g, const ConConfig& cfg = {}, unsigned threads = 1);

/// Sum of con_pair over unordered pairs of distinct members (duplicates in
/// `nodes` are ignored). Needs at least two distinct nodes.
double con_set(const WeightedDigraph& g, std::span<const NodeId> nodes, const ConConfig& cfg = {});

/// PageRank of reverse(g) with weight-proportional transitions. Dangling
/// mass is spread uniformly. Computed directly on g without materialising
/// the reversed graph.
PageRankResult pagerank_reversed(const WeightedDigraph& g, const PageRankConfig& cfg = {});

/// Min-max rescale to [0,1]; a constant input maps to all zeros.
std::vector<double> unity_normalize(std::span<const double> scores);

std::vector<double> lkl_strength(std::span<const double> con_norm, std::span<const double> pr_norm);

LeaderClass classify_leader(double epsilon, const LeaderThresholds& th);
std::vector<LeaderClass> classify_leaders(std::span<const double> epsilon, const LeaderThresholds& th);

CentralityReport analyze_snapshot(const WeightedDigraph& g, const CentralityConfig& cfg = {});

struct PeriodReport {
    std::string period;
    CentralityReport report;
};

/// One report per snapshot in period order; snapshots run on up to `threads`
/// workers.
std::vector<PeriodReport> analyze_series(const SnapshotSeries& series, const CentralityConfig& cfg = {},
                                         unsigned threads = 1);

} // namespace banknet
