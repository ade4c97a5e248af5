#include "banknet/centrality.hpp"

#include "banknet/error.hpp"
#include "banknet/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace banknet {

std::string_view to_string(ConCombiner c) noexcept {
    switch (c) {
    case ConCombiner::Min: return "min";
    case ConCombiner::Product: return "product";
    case ConCombiner::Sum: return "sum";
    }
    return "min";
}

ConCombiner parse_combiner(std::string_view name) {
    if (name == "min") return ConCombiner::Min;
    if (name == "product") return ConCombiner::Product;
    if (name == "sum") return ConCombiner::Sum;
    throw Error(ErrorKind::InvalidConfig, "unknown CON combiner '" + std::string(name) + "'");
}

std::string_view to_string(LeaderClass c) noexcept {
    switch (c) {
    case LeaderClass::LowKey: return "LOW_KEY";
    case LeaderClass::HighlyExposed: return "HIGHLY_EXPOSED";
    case LeaderClass::Neither: return "NEITHER";
    }
    return "NEITHER";
}

void PageRankConfig::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw Error(ErrorKind::InvalidConfig, "damping must lie in (0,1)");
    if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidConfig, "tolerance must be positive");
    if (max_iterations == 0) throw Error(ErrorKind::InvalidConfig, "max_iterations must be positive");
}

void LeaderThresholds::validate() const {
    if (!(highly_exposed < 0.0 && 0.0 < low_key))
        throw Error(ErrorKind::InvalidConfig, "leader thresholds must satisfy C < 0 < c");
}

namespace {

inline double combine(ConCombiner c, double a, double b) noexcept {
    switch (c) {
    case ConCombiner::Min: return std::min(a, b);
    case ConCombiner::Product: return a * b;
    case ConCombiner::Sum: return a + b;
    }
    return 0.0;
}

void check_node(const WeightedDigraph& g, NodeId u) {
    if (u >= g.node_count()) throw Error(ErrorKind::UnknownNode, "node id " + std::to_string(u) + " out of range");
}

// Per-node CON with reusable scratch space. Partial sums per partner v are
// built in increasing out-neighbour order, then folded in increasing v, which
// is the same operation order as summing con_pair over v directly.
class ConAccumulator {
public:
    explicit ConAccumulator(std::size_t n) : partial_(n, 0.0), touched_flag_(n, 0) {}

    double run(const WeightedDigraph& g, NodeId u, ConCombiner c) {
        for (const Arc& uw : g.out_arcs(u)) {
            for (const Arc& vw : g.in_arcs(uw.node)) {
                if (vw.node == u) continue;
                if (!touched_flag_[vw.node]) {
                    touched_flag_[vw.node] = 1;
                    touched_.push_back(vw.node);
                }
                partial_[vw.node] += combine(c, uw.weight, vw.weight);
            }
        }
        std::sort(touched_.begin(), touched_.end());
        double total = 0.0;
        for (NodeId v : touched_) {
            total += partial_[v];
            partial_[v] = 0.0;
            touched_flag_[v] = 0;
        }
        touched_.clear();
        return total;
    }

private:
    std::vector<double> partial_;
    std::vector<char> touched_flag_;
    std::vector<NodeId> touched_;
};

} // namespace

double con_pair(const WeightedDigraph& g, NodeId u, NodeId v, const ConConfig& cfg) {
    check_node(g, u);
    check_node(g, v);
    if (u == v) throw Error(ErrorKind::SameNode, "con_pair needs two distinct nodes");
    auto a = g.out_arcs(u);
    auto b = g.out_arcs(v);
    double total = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].node < b[j].node) {
            ++i;
        } else if (b[j].node < a[i].node) {
            ++j;
        } else {
            total += combine(cfg.combiner, a[i].weight, b[j].weight);
            ++i;
            ++j;
        }
    }
    return total;
}

double con_node(const WeightedDigraph& g, NodeId u, const ConConfig& cfg) {
    check_node(g, u);
    ConAccumulator acc(g.node_count());
    return acc.run(g, u, cfg.combiner);
}

std::vector<double> con_all(const WeightedDigraph& g, const ConConfig& cfg, unsigned threads) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    // One contiguous block per worker so each reuses a single accumulator.
    const std::size_t block = (n + threads - 1) / threads;
    parallel_for(threads, threads, [&](std::size_t t) {
        ConAccumulator acc(n);
        const std::size_t end = std::min(n, (t + 1) * block);
        for (std::size_t u = t * block; u < end; ++u) out[u] = acc.run(g, static_cast<NodeId>(u), cfg.combiner);
    });
    return out;
}

double con_set(const WeightedDigraph& g, std::span<const NodeId> nodes, const ConConfig& cfg) {
    std::vector<NodeId> members(nodes.begin(), nodes.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (NodeId u : members) check_node(g, u);
    if (members.size() < 2) throw Error(ErrorKind::SetTooSmall, "con_set needs at least two distinct nodes");
    double total = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) total += con_pair(g, members[i], members[j], cfg);
    return total;
}

PageRankResult pagerank_reversed(const WeightedDigraph& g, const PageRankConfig& cfg) {
    cfg.validate();
    const std::size_t n = g.node_count();
    PageRankResult result;
    if (n == 0) return result;

    // In the reversed graph a node's out-weight is its in-weight here, and
    // the arc a -> b there is the edge (b, a) here.
    std::vector<double> reversed_out_weight(n);
    for (NodeId a = 0; a < n; ++a) reversed_out_weight[a] = g.in_weight(a);

    const double nd = static_cast<double>(n);
    std::vector<double> rank(n, 1.0 / nd);
    std::vector<double> next(n);
    result.converged = false;

    for (std::uint32_t it = 0; it < cfg.max_iterations; ++it) {
        double dangling = 0.0;
        for (NodeId a = 0; a < n; ++a)
            if (reversed_out_weight[a] == 0.0) dangling += rank[a];
        const double base = (1.0 - cfg.damping) / nd + cfg.damping * dangling / nd;

        for (NodeId b = 0; b < n; ++b) {
            double pulled = 0.0;
            for (const Arc& arc : g.out_arcs(b)) pulled += rank[arc.node] * arc.weight / reversed_out_weight[arc.node];
            next[b] = base + cfg.damping * pulled;
        }

        double change = 0.0;
        for (NodeId u = 0; u < n; ++u) change += std::abs(next[u] - rank[u]);
        rank.swap(next);
        result.iterations = it + 1;
        if (change < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }

    double sum = 0.0;
    for (double r : rank) sum += r;
    for (double& r : rank) r /= sum;
    result.scores = std::move(rank);
    return result;
}

std::vector<double> unity_normalize(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorKind::EmptyInput, "cannot normalise an empty score set");
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double min = *lo, range = *hi - *lo;
    std::vector<double> out(scores.size(), 0.0);
    if (range == 0.0) return out;
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - min) / range;
    return out;
}

std::vector<double> lkl_strength(std::span<const double> con_norm, std::span<const double> pr_norm) {
    if (con_norm.size() != pr_norm.size())
        throw Error(ErrorKind::KeyMismatch, "CON and PageRank vectors cover different node sets");
    std::vector<double> eps(con_norm.size());
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = con_norm[i] - pr_norm[i];
    return eps;
}

LeaderClass classify_leader(double epsilon, const LeaderThresholds& th) {
    if (epsilon > th.low_key) return LeaderClass::LowKey;
    if (epsilon < th.highly_exposed) return LeaderClass::HighlyExposed;
    return LeaderClass::Neither;
}

std::vector<LeaderClass> classify_leaders(std::span<const double> epsilon, const LeaderThresholds& th) {
    th.validate();
    std::vector<LeaderClass> out(epsilon.size());
    for (std::size_t i = 0; i < epsilon.size(); ++i) out[i] = classify_leader(epsilon[i], th);
    return out;
}

CentralityReport analyze_snapshot(const WeightedDigraph& g, const CentralityConfig& cfg) {
    cfg.thresholds.validate();
    CentralityReport report;
    report.labels.assign(g.labels().begin(), g.labels().end());
    const std::size_t n = g.node_count();
    if (n == 0) return report;

    const auto con = con_all(g, cfg.con);
    const auto pr = pagerank_reversed(g, cfg.pagerank);
    const auto con_norm = unity_normalize(con);
    const auto pr_norm = unity_normalize(pr.scores);
    const auto eps = lkl_strength(con_norm, pr_norm);
    const auto cls = classify_leaders(eps, cfg.thresholds);

    report.pagerank_iterations = pr.iterations;
    report.pagerank_converged = pr.converged;
    report.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) report.nodes[i] = {con[i], pr.scores[i], con_norm[i], pr_norm[i], eps[i], cls[i]};
    return report;
}

std::vector<PeriodReport> analyze_series(const SnapshotSeries& series, const CentralityConfig& cfg, unsigned threads) {
    std::vector<PeriodReport> out(series.size());
    parallel_for(series.size(), threads, [&](std::size_t i) {
        out[i] = {series[i].period, analyze_snapshot(series[i].graph, cfg)};
    });
    return out;
}

} // namespace banknet
