#include "banknet/aml.hpp"

#include "banknet/error.hpp"
#include "banknet/parallel.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_map>
#include <limits>

namespace banknet {

void AmlConfig::validate() const {
    if (t0 <= 0) throw Error(ErrorKind::InvalidConfig, "t0 must be positive");
    if (!(amount_threshold > 0.0)) throw Error(ErrorKind::InvalidConfig, "amount threshold must be positive");
    if (min_cycle_len < 3 || max_cycle_len < min_cycle_len)
        throw Error(ErrorKind::InvalidConfig, "cycle lengths must satisfy 3 <= min <= max");
    if (path_len_min == 0 || path_len_max < path_len_min)
        throw Error(ErrorKind::InvalidConfig, "path lengths must satisfy 0 < a <= b");
    if (min_community_order < 1) throw Error(ErrorKind::InvalidConfig, "minimum community order must be >= 1");
}

std::vector<TransactionEdge> filter_period(std::span<const TransactionEdge> edges, int t0) {
    if (t0 <= 0) throw Error(ErrorKind::InvalidConfig, "t0 must be positive");
    std::vector<TransactionEdge> out;
    for (const auto& e : edges)
        if (e.span_years() < t0) out.push_back(e);
    return out;
}

std::vector<TransactionEdge> filter_amount(std::span<const TransactionEdge> edges, double threshold) {
    if (!(threshold > 0.0)) throw Error(ErrorKind::InvalidConfig, "amount threshold must be positive");
    std::vector<TransactionEdge> out;
    for (const auto& e : edges)
        if (e.average_amount() < threshold) out.push_back(e);
    return out;
}

namespace {

constexpr std::uint32_t unreachable = std::numeric_limits<std::uint32_t>::max();

// Depth-first search for cycles through `start` that only visit larger ids.
// back_dist[v] is the hop distance from v back to start within that node
// range; branches that cannot close within max_len are cut.
class CycleSearch {
public:
    CycleSearch(const WeightedDigraph& g, std::uint32_t min_len, std::uint32_t max_len, std::uint32_t community,
                CycleEnumeration& out)
        : g_(g), min_len_(min_len), max_len_(max_len), community_(community), out_(out),
          back_dist_(g.node_count(), unreachable), on_path_(g.node_count(), 0) {}

    void run_from(NodeId start) {
        start_ = start;
        compute_back_distances();
        if (reached_.size() > 1) {
            path_.assign(1, start);
            on_path_[start] = 1;
            extend(start);
            on_path_[start] = 0;
        }
        for (NodeId v : reached_) back_dist_[v] = unreachable;
    }

private:
    void compute_back_distances() {
        reached_.assign(1, start_);
        back_dist_[start_] = 0;
        for (std::size_t head = 0; head < reached_.size(); ++head) {
            const NodeId v = reached_[head];
            for (const Arc& a : g_.in_arcs(v)) {
                if (a.node <= start_ || back_dist_[a.node] != unreachable) continue;
                back_dist_[a.node] = back_dist_[v] + 1;
                reached_.push_back(a.node);
            }
        }
    }

    void extend(NodeId v) {
        const auto depth = static_cast<std::uint32_t>(path_.size()); // edges once the next hop is taken
        for (const Arc& a : g_.out_arcs(v)) {
            const NodeId w = a.node;
            if (w == start_) {
                if (depth >= min_len_) out_.cycles.push_back({community_, path_});
                continue;
            }
            if (w < start_ || on_path_[w] || back_dist_[w] == unreachable) continue;
            if (depth + back_dist_[w] > max_len_) {
                out_.length_cap_pruned = true;
                continue;
            }
            path_.push_back(w);
            on_path_[w] = 1;
            extend(w);
            on_path_[w] = 0;
            path_.pop_back();
        }
    }

    const WeightedDigraph& g_;
    std::uint32_t min_len_;
    std::uint32_t max_len_;
    std::uint32_t community_;
    CycleEnumeration& out_;
    std::vector<std::uint32_t> back_dist_;
    std::vector<char> on_path_;
    std::vector<NodeId> reached_;
    std::vector<NodeId> path_;
    NodeId start_ = 0;
};

// BFS from one source recording distance, the smallest-id predecessor on a
// shortest path and the number of shortest paths.
struct BfsTree {
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> parent;
    std::vector<std::uint64_t> sigma;
    std::vector<NodeId> order;

    explicit BfsTree(std::size_t n) : dist(n, unreachable), parent(n, 0), sigma(n, 0) {}

    void run(const WeightedDigraph& g, NodeId source, std::uint32_t max_depth) {
        for (NodeId v : order) {
            dist[v] = unreachable;
            sigma[v] = 0;
        }
        order.assign(1, source);
        dist[source] = 0;
        sigma[source] = 1;
        parent[source] = source;
        for (std::size_t head = 0; head < order.size(); ++head) {
            const NodeId u = order[head];
            if (dist[u] >= max_depth) continue;
            for (const Arc& a : g.out_arcs(u)) {
                const NodeId v = a.node;
                if (dist[v] == unreachable) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    order.push_back(v);
                } else if (dist[v] != dist[u] + 1) {
                    continue;
                } else if (u < parent[v]) {
                    parent[v] = u;
                }
                const std::uint64_t s = sigma[v] + sigma[u];
                sigma[v] = s < sigma[v] ? std::numeric_limits<std::uint64_t>::max() : s;
            }
        }
    }
};

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t s = a + b;
    return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

void check_path_bounds(std::uint32_t a, std::uint32_t b) {
    if (a == 0 || b < a) throw Error(ErrorKind::InvalidConfig, "path lengths must satisfy 0 < a <= b");
}

} // namespace

CycleEnumeration enumerate_cycles(const WeightedDigraph& g, std::uint32_t min_len, std::uint32_t max_len,
                                  std::uint32_t community) {
    if (min_len < 2 || max_len < min_len)
        throw Error(ErrorKind::InvalidConfig, "cycle lengths must satisfy 2 <= min <= max");
    CycleEnumeration out;
    CycleSearch search(g, min_len, max_len, community, out);
    for (NodeId s = 0; s < g.node_count(); ++s) search.run_from(s);
    return out;
}

std::vector<PathRecord> enumerate_paths(const WeightedDigraph& g, std::uint32_t a, std::uint32_t b,
                                        std::uint32_t community) {
    check_path_bounds(a, b);
    std::vector<PathRecord> out;
    BfsTree tree(g.node_count());
    for (NodeId s = 0; s < g.node_count(); ++s) {
        tree.run(g, s, b);
        std::vector<NodeId> targets;
        for (NodeId t : tree.order)
            if (tree.dist[t] >= a) targets.push_back(t);
        std::sort(targets.begin(), targets.end());
        for (NodeId t : targets) {
            PathRecord rec{community, s, t, {}};
            for (NodeId v = t; v != s; v = tree.parent[v]) rec.nodes.push_back(v);
            rec.nodes.push_back(s);
            std::reverse(rec.nodes.begin(), rec.nodes.end());
            out.push_back(std::move(rec));
        }
    }
    return out;
}

PathSummary summarize_paths(const WeightedDigraph& g, std::uint32_t a, std::uint32_t b) {
    check_path_bounds(a, b);
    PathSummary summary;
    const std::size_t n = g.node_count();
    BfsTree tree(n);
    std::vector<char> on_path(n, 0);
    std::vector<NodeId> stamp(n, static_cast<NodeId>(-1));
    for (NodeId s = 0; s < n; ++s) {
        tree.run(g, s, b);
        for (NodeId t : tree.order) {
            if (tree.dist[t] < a) continue;
            ++summary.path_count;
            summary.all_shortest_path_count = saturating_add(summary.all_shortest_path_count, tree.sigma[t]);
            // Predecessor chains are fixed per source, so a node already
            // stamped for s has its whole chain marked.
            for (NodeId v = t; stamp[v] != s; v = tree.parent[v]) {
                stamp[v] = s;
                on_path[v] = 1;
                if (v == s) break;
            }
        }
    }
    for (NodeId v = 0; v < n; ++v)
        if (on_path[v]) summary.path_nodes.push_back(v);
    return summary;
}

std::optional<double> r_value(std::span<const NodeId> path_nodes, std::span<const NodeId> cycle_nodes) {
    if (path_nodes.empty()) return std::nullopt;
    std::vector<NodeId> both;
    std::set_intersection(path_nodes.begin(), path_nodes.end(), cycle_nodes.begin(), cycle_nodes.end(),
                          std::back_inserter(both));
    return static_cast<double>(both.size()) / static_cast<double>(path_nodes.size());
}

AmlReport run_aml_pipeline(std::span<const TransactionEdge> edges, const LouvainConfig& louvain_cfg,
                           const AmlConfig& cfg, unsigned threads) {
    cfg.validate();
    louvain_cfg.validate();
    AmlReport report;
    AmlSummary& sum = report.summary;

    // Account ids in order of first appearance, zero-amount pairs included so
    // that every account in the input is listed.
    std::unordered_map<std::string, NodeId> index;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index.emplace(label, static_cast<NodeId>(report.accounts.size()));
        if (inserted) report.accounts.push_back(label);
        return it->second;
    };
    const auto merged = merge_transactions(edges);
    struct Pair {
        NodeId u, v;
        const TransactionEdge* edge;
    };
    std::vector<Pair> pairs;
    std::vector<Edge> graph_edges;
    for (const auto& e : merged) {
        const NodeId u = intern(e.source);
        const NodeId v = intern(e.target);
        if (u == v) throw Error(ErrorKind::SelfLoop, "account '" + e.source + "' pays itself");
        if (!(e.amount > 0.0)) {
            ++sum.zero_amount_edges_ignored;
            continue;
        }
        pairs.push_back({u, v, &e});
        graph_edges.push_back({u, v, e.amount});
    }
    sum.accounts = report.accounts.size();
    sum.edges = merged.size();

    const auto graph = WeightedDigraph::from_edges(report.accounts, std::move(graph_edges));
    const auto detected = louvain_detailed(graph, louvain_cfg);
    report.partition = detected.partition;
    sum.louvain_communities = detected.partition.community_count();
    sum.louvain_modularity = detected.modularity;

    auto retained = filter_min_order(report.partition, cfg.min_community_order);
    sum.communities = retained.communities.size();
    sum.dropped_accounts = retained.dropped.size();
    std::size_t covered = 0;
    for (const auto& c : retained.communities) {
        covered += c.size();
        sum.largest_community = std::max(sum.largest_community, c.size());
    }
    if (sum.communities > 0) sum.average_community_size = static_cast<double>(covered) / static_cast<double>(sum.communities);

    constexpr std::uint32_t none = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> community_of(report.accounts.size(), none);
    for (std::uint32_t c = 0; c < retained.communities.size(); ++c)
        for (NodeId u : retained.communities[c]) community_of[u] = c;

    // Both filters are independent edge predicates; counts follow the order
    // period first, then amount.
    std::vector<std::vector<Edge>> buckets(retained.communities.size());
    for (const Pair& p : pairs) {
        const auto c = community_of[p.u];
        if (c == none || c != community_of[p.v]) continue;
        ++sum.community_edges;
        if (p.edge->span_years() >= cfg.t0) continue;
        ++sum.period_filtered_edges;
        if (!(p.edge->average_amount() < cfg.amount_threshold)) continue;
        ++sum.amount_filtered_edges;
        buckets[c].push_back({p.u, p.v, p.edge->amount});
    }

    std::vector<CommunityFinding> findings(retained.communities.size());
    std::vector<std::vector<NodeId>> cycle_nodes(retained.communities.size());
    std::vector<std::vector<NodeId>> path_nodes(retained.communities.size());
    parallel_for(retained.communities.size(), threads, [&](std::size_t c) {
        const auto& members = retained.communities[c];
        CommunityFinding& f = findings[c];
        f.id = static_cast<std::uint32_t>(c);
        f.size = members.size();
        f.filtered_edge_count = buckets[c].size();
        if (buckets[c].size() < cfg.min_cycle_len) return;

        // Members are sorted, so local ids preserve account-id order and the
        // canonical rotation carries over.
        std::vector<std::string> labels;
        labels.reserve(members.size());
        for (NodeId u : members) labels.push_back(report.accounts[u]);
        auto local = [&](NodeId u) {
            return static_cast<NodeId>(std::lower_bound(members.begin(), members.end(), u) - members.begin());
        };
        std::vector<Edge> local_edges;
        local_edges.reserve(buckets[c].size());
        for (const Edge& e : buckets[c]) local_edges.push_back({local(e.source), local(e.target), e.weight});
        const auto sub = WeightedDigraph::from_edges(std::move(labels), std::move(local_edges));

        auto found = enumerate_cycles(sub, cfg.min_cycle_len, cfg.max_cycle_len, f.id);
        f.length_cap_pruned = found.length_cap_pruned;
        if (found.cycles.empty()) return;

        std::vector<NodeId> on_cycle;
        for (auto& rec : found.cycles) {
            std::vector<NodeId> ids;
            ids.reserve(rec.nodes.size());
            for (NodeId v : rec.nodes) {
                ids.push_back(members[v]);
                on_cycle.push_back(v);
            }
            f.cycles.push_back(std::move(ids));
        }
        std::sort(on_cycle.begin(), on_cycle.end());
        on_cycle.erase(std::unique(on_cycle.begin(), on_cycle.end()), on_cycle.end());

        auto paths = summarize_paths(sub, cfg.path_len_min, cfg.path_len_max);
        f.path_count = paths.path_count;
        f.all_shortest_path_count = paths.all_shortest_path_count;
        f.path_node_count = paths.path_nodes.size();
        f.cycle_node_count = on_cycle.size();
        std::vector<NodeId> both;
        std::set_intersection(paths.path_nodes.begin(), paths.path_nodes.end(), on_cycle.begin(), on_cycle.end(),
                              std::back_inserter(both));
        f.overlap_count = both.size();
        f.r_value = r_value(paths.path_nodes, on_cycle);

        for (NodeId v : on_cycle) cycle_nodes[c].push_back(members[v]);
        for (NodeId v : paths.path_nodes) path_nodes[c].push_back(members[v]);
    });

    for (std::size_t c = 0; c < findings.size(); ++c) {
        CommunityFinding& f = findings[c];
        if (f.length_cap_pruned) ++sum.length_capped_communities;
        if (f.cycles.empty()) continue;
        ++sum.cycle_communities;
        sum.cycles += f.cycles.size();
        for (const auto& cyc : f.cycles) ++sum.cycles_by_length[cyc.size()];
        sum.paths += f.path_count;
        sum.all_shortest_paths = saturating_add(sum.all_shortest_paths, f.all_shortest_path_count);
        sum.path_accounts += f.path_node_count;
        sum.path_cycle_overlap_accounts += f.overlap_count;
        report.flagged_accounts.insert(report.flagged_accounts.end(), cycle_nodes[c].begin(), cycle_nodes[c].end());
        report.communities.push_back(std::move(f));
    }
    std::sort(report.flagged_accounts.begin(), report.flagged_accounts.end());
    sum.cycle_accounts = report.flagged_accounts.size();
    if (sum.path_accounts > 0)
        sum.global_r_value = static_cast<double>(sum.path_cycle_overlap_accounts) / static_cast<double>(sum.path_accounts);
    return report;
}

} // namespace banknet
