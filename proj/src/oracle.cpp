#include "banknet/oracle.hpp"

#include "banknet/aml.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

namespace banknet::oracle {

WeightedDigraph random_digraph(std::mt19937_64& rng, std::size_t n, double p, double lo, double hi, bool integral) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("n" + std::to_string(i));
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v) {
            if (u == v || unit(rng) >= p) continue;
            double w = integral ? std::floor(lo + unit(rng) * (hi - lo + 1.0)) : lo + unit(rng) * (hi - lo);
            edges.push_back({u, v, std::max(w, lo)});
        }
    return WeightedDigraph::from_edges(std::move(labels), std::move(edges));
}

double con_node(const WeightedDigraph& g, NodeId u, ConCombiner c) {
    const auto n = static_cast<NodeId>(g.node_count());
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        if (v == u) continue;
        double pair = 0.0;
        for (NodeId w = 0; w < n; ++w) {
            const auto a = g.weight(u, w);
            const auto b = g.weight(v, w);
            if (!a || !b) continue;
            switch (c) {
            case ConCombiner::Min: pair += std::min(*a, *b); break;
            case ConCombiner::Product: pair += *a * *b; break;
            case ConCombiner::Sum: pair += *a + *b; break;
            }
        }
        total += pair;
    }
    return total;
}

std::vector<double> pagerank_reversed(const WeightedDigraph& g, double damping) {
    const std::size_t n = g.node_count();
    if (n == 0) return {};
    // transition[a][b]: probability of stepping a -> b in the reversed graph.
    std::vector<std::vector<double>> transition(n, std::vector<double>(n, 0.0));
    for (NodeId a = 0; a < n; ++a) {
        double out = 0.0;
        for (NodeId b = 0; b < n; ++b)
            if (auto w = g.weight(b, a)) out += *w;
        for (NodeId b = 0; b < n; ++b) {
            if (out == 0.0)
                transition[a][b] = 1.0 / static_cast<double>(n);
            else if (auto w = g.weight(b, a))
                transition[a][b] = *w / out;
        }
    }
    std::vector<double> rank(n, 1.0 / static_cast<double>(n)), next(n);
    for (int it = 0; it < 100000; ++it) {
        for (std::size_t b = 0; b < n; ++b) {
            double s = 0.0;
            for (std::size_t a = 0; a < n; ++a) s += rank[a] * transition[a][b];
            next[b] = (1.0 - damping) / static_cast<double>(n) + damping * s;
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
        rank.swap(next);
        if (change < 1e-15) break;
    }
    return rank;
}

std::vector<std::vector<NodeId>> simple_cycles(const WeightedDigraph& g, std::size_t min_len, std::size_t max_len) {
    const auto n = static_cast<NodeId>(g.node_count());
    std::set<std::vector<NodeId>> found;
    std::vector<NodeId> path;
    std::vector<char> on(n, 0);
    std::function<void(NodeId)> walk = [&](NodeId v) {
        for (NodeId w = 0; w < n; ++w) {
            if (!g.weight(v, w)) continue;
            if (w == path.front()) {
                if (path.size() >= min_len && path.size() <= max_len) {
                    auto rotated = path;
                    std::rotate(rotated.begin(), std::min_element(rotated.begin(), rotated.end()), rotated.end());
                    found.insert(rotated);
                }
            } else if (!on[w]) {
                on[w] = 1;
                path.push_back(w);
                walk(w);
                path.pop_back();
                on[w] = 0;
            }
        }
    };
    for (NodeId s = 0; s < n; ++s) {
        path.assign(1, s);
        on[s] = 1;
        walk(s);
        on[s] = 0;
    }
    return {found.begin(), found.end()};
}

double modularity(const UndirectedGraph& g, const std::vector<std::uint32_t>& assignment, double resolution) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (NodeId u = 0; u < n; ++u) {
        a[u][u] = g.self_weight(u);
        for (const Arc& arc : g.neighbors(u)) a[u][arc.node] = arc.weight;
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
        two_m += k[i];
    }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (assignment[i] == assignment[j]) q += a[i][j] - resolution * k[i] * k[j] / two_m;
    return q / two_m;
}

double best_modularity(const UndirectedGraph& g, double resolution) {
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> rgs(n, 0);
    double best = -std::numeric_limits<double>::infinity();
    // Restricted growth strings: rgs[i] <= 1 + max(rgs[0..i-1]).
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t max_used) {
        if (i == n) {
            best = std::max(best, oracle::modularity(g, rgs, resolution));
            return;
        }
        for (std::uint32_t c = 0; c <= max_used + 1; ++c) {
            rgs[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    if (n == 0) return 0.0;
    rgs[0] = 0;
    rec(1, 0);
    return best;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t i) {
    // splitmix64 step so neighbouring instances are decorrelated
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

std::string describe(const char* what, double got, double want) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", expected " << want;
    return os.str();
}

} // namespace

std::vector<SuiteFailure> run_oracle_suites(const OracleRunOptions& opts) {
    std::vector<SuiteFailure> failures;
    const double fault = opts.inject_fault ? 1e-3 : 0.0;

    for (std::size_t i = 0; i < opts.iterations; ++i) {
        const auto seed = instance_seed(opts.seed, i);
        std::mt19937_64 rng(seed);

        // CON: bit-exact for every combiner.
        {
            const auto g = random_digraph(rng, 2 + rng() % 29, 0.1 + 0.3 * unit(rng), 0.5, 50.0);
            auto first_mismatch = [&]() -> std::optional<std::string> {
                for (auto c : {ConCombiner::Min, ConCombiner::Product, ConCombiner::Sum}) {
                    const auto fast = con_all(g, {c});
                    for (NodeId u = 0; u < g.node_count(); ++u) {
                        const double want = oracle::con_node(g, u, c);
                        if (fast[u] + fault != want) return describe("con_node", fast[u] + fault, want);
                    }
                }
                return std::nullopt;
            };
            if (auto detail = first_mismatch()) failures.push_back({"con", seed, *detail});
        }

        // PageRank: 1e-8 per component, sum 1 +- 1e-9.
        {
            const auto g = random_digraph(rng, 1 + rng() % 20, 0.1 + 0.4 * unit(rng), 0.5, 50.0);
            const auto got = banknet::pagerank_reversed(g).scores;
            const auto want = oracle::pagerank_reversed(g, 0.85);
            double sum = 0.0;
            for (std::size_t u = 0; u < got.size(); ++u) {
                sum += got[u];
                if (std::abs(got[u] + fault - want[u]) > 1e-8) {
                    failures.push_back({"pagerank", seed, describe("pagerank", got[u] + fault, want[u])});
                    break;
                }
            }
            if (std::abs(sum - 1.0) > 1e-9) failures.push_back({"pagerank", seed, describe("sum", sum, 1.0)});
        }

        // Cycles: identical sets for lengths 3..8.
        {
            const auto g = random_digraph(rng, 1 + rng() % 8, 0.15 + 0.4 * unit(rng));
            auto found = enumerate_cycles(g, 3, 8).cycles;
            std::vector<std::vector<NodeId>> got;
            for (auto& c : found) got.push_back(std::move(c.nodes));
            std::sort(got.begin(), got.end());
            const auto want = oracle::simple_cycles(g, 3, 8);
            if (opts.inject_fault || got != want)
                failures.push_back({"cycles", seed,
                                    "found " + std::to_string(got.size()) + " cycles, expected " + std::to_string(want.size())});
        }

        // Modularity: CSR evaluation vs dense double sum on a random partition.
        {
            const auto g = symmetrize(random_digraph(rng, 2 + rng() % 12, 0.2 + 0.4 * unit(rng)));
            if (g.total_weight() > 0.0) {
                std::vector<std::uint32_t> assignment(g.node_count());
                for (auto& c : assignment) c = static_cast<std::uint32_t>(rng() % 4);
                const auto p = Partition::from_assignment(assignment);
                const double got = banknet::modularity(g, p) + fault;
                const double want = oracle::modularity(g, {p.assignment().begin(), p.assignment().end()});
                if (std::abs(got - want) > 1e-12) failures.push_back({"modularity", seed, describe("modularity", got, want)});

                const auto lv = louvain_detailed(g, {.seed = seed});
                const double singleton = banknet::modularity(g, Partition::singletons(g.node_count()));
                if (lv.modularity < singleton)
                    failures.push_back({"modularity", seed, describe("louvain below singleton", lv.modularity, singleton)});
            }
        }
    }
    return failures;
}

} // namespace banknet::oracle
