#pragma once

// Brute-force reference computations and random instance generators. None of
// these call into the optimised analysis code; they only read graphs through
// their public accessors.

#include "banknet/centrality.hpp"
#include "banknet/community.hpp"
#include "banknet/graph.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace banknet::oracle {

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Each ordered pair becomes an edge with probability p; weights uniform in
/// [lo, hi), or integers in [lo, hi] when integral is set.
WeightedDigraph random_digraph(std::mt19937_64& rng, std::size_t n, double p, double lo = 1.0, double hi = 100.0,
                               bool integral = false);

/// Sum over v != u (increasing) of the pairwise sum over all w (increasing)
/// where both (u,w) and (v,w) exist.
double con_node(const WeightedDigraph& g, NodeId u, ConCombiner c);

/// Dense transition matrix of reverse(g), iterated until the L1 change is
/// below 1e-15 or 100000 steps.
std::vector<double> pagerank_reversed(const WeightedDigraph& g, double damping);

/// All simple directed cycles by exhaustive DFS over simple paths from every
/// start, rotated to start at their smallest id and deduplicated.
std::vector<std::vector<NodeId>> simple_cycles(const WeightedDigraph& g, std::size_t min_len, std::size_t max_len);

/// Modularity as the double sum over node pairs of a dense adjacency matrix.
double modularity(const UndirectedGraph& g, const std::vector<std::uint32_t>& assignment, double resolution = 1.0);

/// Maximum modularity over every set partition (restricted growth strings).
/// Only feasible for roughly n <= 12.
double best_modularity(const UndirectedGraph& g, double resolution = 1.0);

struct SuiteFailure {
    std::string suite;
    std::uint64_t seed = 0;
    std::string detail;
};

struct OracleRunOptions {
    std::size_t iterations = 100;
    std::uint64_t seed = 1;
    bool inject_fault = false; // perturbs the checked values; used to test failure reporting
};

/// Runs the CON, PageRank, cycle and modularity comparisons on `iterations`
/// random instances each. Every instance is reproducible from its seed.
std::vector<SuiteFailure> run_oracle_suites(const OracleRunOptions& opts);

/// Seed of instance i in a run started from `seed`.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t i);

} // namespace banknet::oracle
