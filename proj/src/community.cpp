#include "banknet/community.hpp"

#include "banknet/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace banknet {

UndirectedGraph::UndirectedGraph(std::size_t n, std::span<const Link> links) : self_(n, 0.0), degree_(n, 0.0) {
    std::vector<Link> sorted;
    sorted.reserve(links.size());
    for (const Link& l : links) {
        if (l.u >= n || l.v >= n) throw Error(ErrorKind::UnknownNode, "link endpoint out of range");
        if (l.u == l.v) {
            self_[l.u] += l.weight;
            continue;
        }
        sorted.push_back(l.u < l.v ? l : Link{l.v, l.u, l.weight});
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Link& a, const Link& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    std::vector<Link> merged;
    merged.reserve(sorted.size());
    for (const Link& l : sorted) {
        if (!merged.empty() && merged.back().u == l.u && merged.back().v == l.v)
            merged.back().weight += l.weight;
        else
            merged.push_back(l);
    }

    offsets_.assign(n + 1, 0);
    for (const Link& l : merged) {
        ++offsets_[l.u + 1];
        ++offsets_[l.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    arcs_.resize(2 * merged.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Two sweeps keep every adjacency list sorted: first the neighbours
    // smaller than the owner, then the larger ones.
    for (const Link& l : merged) arcs_[fill[l.v]++] = {l.u, l.weight};
    for (const Link& l : merged) arcs_[fill[l.u]++] = {l.v, l.weight};

    double twice_m = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        double k = self_[u];
        for (const Arc& a : neighbors(u)) k += a.weight;
        degree_[u] = k;
        twice_m += k;
    }
    total_ = twice_m / 2.0;
}

std::vector<UndirectedGraph::Link> UndirectedGraph::links() const {
    std::vector<Link> out;
    for (NodeId u = 0; u < node_count(); ++u)
        for (const Arc& a : neighbors(u))
            if (u < a.node) out.push_back({u, a.node, a.weight});
    return out;
}

UndirectedGraph symmetrize(const WeightedDigraph& g) {
    std::vector<UndirectedGraph::Link> links;
    links.reserve(g.edge_count());
    g.for_each_edge([&](NodeId u, NodeId v, double w) { links.push_back({u, v, w}); });
    return UndirectedGraph(g.node_count(), links);
}

Partition Partition::from_assignment(std::vector<std::uint32_t> assignment) {
    constexpr std::uint32_t unset = static_cast<std::uint32_t>(-1);
    std::uint32_t max_id = 0;
    for (auto c : assignment) max_id = std::max(max_id, c);
    std::vector<std::uint32_t> relabel(assignment.empty() ? 0 : std::size_t{max_id} + 1, unset);
    Partition p;
    std::uint32_t next = 0;
    for (auto& c : assignment) {
        if (relabel[c] == unset) relabel[c] = next++;
        c = relabel[c];
    }
    p.assignment_ = std::move(assignment);
    p.count_ = next;
    return p;
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::uint32_t> a(n);
    std::iota(a.begin(), a.end(), 0u);
    return from_assignment(std::move(a));
}

std::vector<std::vector<NodeId>> Partition::communities() const {
    std::vector<std::vector<NodeId>> out(count_);
    for (NodeId u = 0; u < assignment_.size(); ++u) out[assignment_[u]].push_back(u);
    return out;
}

double modularity(const UndirectedGraph& g, const Partition& p, double resolution) {
    if (p.node_count() != g.node_count())
        throw Error(ErrorKind::InvalidConfig, "partition does not cover the graph");
    const double m = g.total_weight();
    if (!(m > 0.0)) throw Error(ErrorKind::EmptyGraph, "modularity is undefined without edge weight");
    std::vector<double> inside(p.community_count(), 0.0);
    std::vector<double> tot(p.community_count(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto c = p.community_of(u);
        tot[c] += g.degree(u);
        inside[c] += g.self_weight(u);
        for (const Arc& a : g.neighbors(u))
            if (p.community_of(a.node) == c) inside[c] += a.weight;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < inside.size(); ++c) {
        const double share = tot[c] / (2.0 * m);
        q += inside[c] / (2.0 * m) - resolution * share * share;
    }
    return q;
}

void LouvainConfig::validate() const {
    if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidConfig, "resolution must be positive");
    if (max_passes == 0) throw Error(ErrorKind::InvalidConfig, "max_passes must be positive");
    if (!(min_modularity_gain >= 0.0)) throw Error(ErrorKind::InvalidConfig, "min_modularity_gain must be >= 0");
}

namespace {

// Fisher-Yates with a plain modulo draw so the order depends only on the
// mt19937_64 stream, not on the standard library's distribution code.
std::vector<NodeId> shuffled_order(std::size_t n, std::mt19937_64& rng) {
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    return order;
}

// One local-moving phase. Returns the community of every node (ids are node
// ids of the community's founding member) and whether anything moved.
bool move_nodes(const UndirectedGraph& g, const LouvainConfig& cfg, std::mt19937_64& rng,
                std::vector<std::uint32_t>& comm) {
    const std::size_t n = g.node_count();
    const double m = g.total_weight();
    const double two_m = 2.0 * m;
    comm.resize(n);
    std::iota(comm.begin(), comm.end(), 0u);
    std::vector<double> tot(n);
    for (NodeId u = 0; u < n; ++u) tot[u] = g.degree(u);

    std::vector<double> link_to(n, 0.0);
    std::vector<char> listed(n, 0);
    std::vector<std::uint32_t> candidates;
    const auto order = shuffled_order(n, rng);
    bool moved_any = false;

    while (true) {
        double sweep_gain = 0.0;
        bool moved = false;
        for (NodeId u : order) {
            const auto own = comm[u];
            const double k = g.degree(u);
            candidates.clear();
            candidates.push_back(own);
            listed[own] = 1;
            for (const Arc& a : g.neighbors(u)) {
                const auto c = comm[a.node];
                if (!listed[c]) {
                    listed[c] = 1;
                    candidates.push_back(c);
                }
                link_to[c] += a.weight;
            }
            tot[own] -= k;

            auto gain = [&](std::uint32_t c) { return link_to[c] - cfg.resolution * tot[c] * k / two_m; };
            const double stay = gain(own);
            std::uint32_t best = own;
            double best_gain = stay;
            for (auto c : candidates) {
                const double gc = gain(c);
                if (gc > best_gain || (gc == best_gain && c < best && gc > stay)) {
                    best = c;
                    best_gain = gc;
                }
            }
            tot[best] += k;
            if (best != own) {
                comm[u] = best;
                moved = true;
                sweep_gain += (best_gain - stay) / m;
            }
            for (auto c : candidates) {
                link_to[c] = 0.0;
                listed[c] = 0;
            }
        }
        if (!moved) break;
        moved_any = true;
        if (sweep_gain < cfg.min_modularity_gain) break;
    }
    return moved_any;
}

UndirectedGraph aggregate(const UndirectedGraph& g, const Partition& p) {
    std::vector<UndirectedGraph::Link> links;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto cu = p.community_of(u);
        if (g.self_weight(u) != 0.0) links.push_back({cu, cu, g.self_weight(u)});
        for (const Arc& a : g.neighbors(u)) {
            const auto cv = p.community_of(a.node);
            // Each undirected edge is visited from both ends. Inside a
            // community both visits add to A_cc (which counts i->j and j->i);
            // across communities keep one visit.
            if (cu == cv)
                links.push_back({cu, cu, a.weight});
            else if (u < a.node)
                links.push_back({cu, cv, a.weight});
        }
    }
    return UndirectedGraph(p.community_count(), links);
}

} // namespace

LouvainResult louvain_detailed(const UndirectedGraph& g, const LouvainConfig& cfg) {
    cfg.validate();
    LouvainResult result;
    const std::size_t n = g.node_count();
    result.partition = Partition::singletons(n);
    if (!(g.total_weight() > 0.0)) return result;

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::uint32_t> global(result.partition.assignment().begin(), result.partition.assignment().end());
    double q = modularity(g, result.partition, cfg.resolution);
    UndirectedGraph level = g;
    std::vector<std::uint32_t> comm;

    for (std::uint32_t pass = 0; pass < cfg.max_passes; ++pass) {
        if (!move_nodes(level, cfg, rng, comm)) break;
        // global stays in the numbering of the current level so that it
        // indexes the aggregated graph built below.
        const Partition level_partition = Partition::from_assignment(comm);
        for (auto& c : global) c = level_partition.community_of(c);
        result.partition = Partition::from_assignment(global);
        ++result.passes;

        const double next_q = modularity(g, result.partition, cfg.resolution);
        const double improvement = next_q - q;
        q = next_q;
        if (improvement < cfg.min_modularity_gain) break;
        level = aggregate(level, level_partition);
        if (level.node_count() == 1) break;
    }
    result.modularity = q;
    return result;
}

LouvainResult louvain_detailed(const WeightedDigraph& g, const LouvainConfig& cfg) {
    return louvain_detailed(symmetrize(g), cfg);
}

Partition louvain(const WeightedDigraph& g, const LouvainConfig& cfg) { return louvain_detailed(g, cfg).partition; }

FilteredPartition filter_min_order(const Partition& p, std::size_t min_order) {
    if (min_order < 1) throw Error(ErrorKind::InvalidConfig, "min_order must be at least 1");
    FilteredPartition out;
    for (auto& members : p.communities()) {
        if (members.size() >= min_order)
            out.communities.push_back(std::move(members));
        else
            out.dropped.insert(out.dropped.end(), members.begin(), members.end());
    }
    std::sort(out.dropped.begin(), out.dropped.end());
    return out;
}

} // namespace banknet
