// banknet: batch front end for the BIS centrality analysis, the AML scan and
// the oracle self-check.
//
// Exit codes: 0 success, 1 oracle mismatch or internal failure, 2 input error.

#include "banknet/aml.hpp"
#include "banknet/centrality.hpp"
#include "banknet/error.hpp"
#include "banknet/ingest.hpp"
#include "banknet/oracle.hpp"
#include "banknet/report_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

namespace fs = std::filesystem;
using namespace banknet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

struct BisOptions {
    std::string input;
    std::string out;
    std::string combiner = "min";
    std::string format = "csv";
    CentralityConfig cfg;
    unsigned threads = 1;
};

struct AmlOptions {
    std::string input;
    std::string out;
    bool header = false;
    AmlConfig cfg;
    LouvainConfig louvain;
    unsigned threads = 1;
};

struct OracleOptions {
    std::size_t iterations = 100;
    std::uint64_t seed = 1;
    bool inject_fault = false;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    return out;
}

// File-system safe name for a country label; clashes get the node id appended.
std::string file_stem(const std::string& label, NodeId id, std::set<std::string>& used) {
    std::string stem;
    for (unsigned char c : label) stem += (std::isalnum(c) || c == '-' || c == '.') ? static_cast<char>(c) : '_';
    if (stem.empty() || !used.insert(stem).second) {
        stem += "_" + std::to_string(id);
        used.insert(stem);
    }
    return stem;
}

int run_bis(const BisOptions& o) {
    CentralityConfig cfg = o.cfg;
    cfg.con.combiner = parse_combiner(o.combiner);
    cfg.pagerank.validate();
    cfg.thresholds.validate();

    const auto series = load_snapshot_series(o.input, o.threads);
    const auto reports = analyze_series(series, cfg, o.threads);

    const fs::path out = o.out;
    fs::create_directories(out / "reports");
    fs::create_directories(out / "epsilon");
    for (const auto& r : reports) {
        if (!r.report.pagerank_converged)
            std::cerr << "warning: PageRank did not converge for " << r.period << " after "
                      << r.report.pagerank_iterations << " iterations\n";
        auto f = open_output(out / "reports" / (r.period + "." + o.format));
        if (o.format == "json")
            write_centrality_json(f, r);
        else
            write_centrality_csv(f, r);
    }
    if (!reports.empty()) {
        std::set<std::string> used;
        const auto& labels = reports.front().report.labels;
        for (NodeId u = 0; u < labels.size(); ++u) {
            auto f = open_output(out / "epsilon" / (file_stem(labels[u], u, used) + ".csv"));
            write_epsilon_series_csv(f, reports, u);
        }
    }
    auto leaders = open_output(out / "leaders.csv");
    write_leaders_csv(leaders, reports);
    std::cout << "analysed " << reports.size() << " snapshot(s) into " << out.string() << "\n";
    return kExitOk;
}

int run_aml(const AmlOptions& o) {
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + o.input + "'");
    const auto edges = parse_transactions(in, o.header, o.input);
    const auto report = run_aml_pipeline(edges, o.louvain, o.cfg, o.threads);

    const fs::path out = o.out;
    fs::create_directories(out);
    {
        auto f = open_output(out / "aml_report.json");
        write_aml_json(f, report);
    }
    {
        auto f = open_output(out / "flagged_accounts.csv");
        write_flagged_csv(f, report);
    }
    {
        auto f = open_output(out / "r_values.csv");
        write_r_values_csv(f, report);
    }
    {
        auto f = open_output(out / "partition.csv");
        write_partition_csv(f, report.accounts, report.partition);
    }
    const auto& s = report.summary;
    std::cout << s.accounts << " accounts, " << s.edges << " edges, " << s.communities << " communities, " << s.cycles
              << " cycles in " << s.cycle_communities << " communities, " << s.cycle_accounts << " flagged accounts\n";
    return kExitOk;
}

int run_oracle(const OracleOptions& o) {
    const auto failures = oracle::run_oracle_suites({o.iterations, o.seed, o.inject_fault});
    for (const auto& f : failures)
        std::cerr << "MISMATCH suite=" << f.suite << " seed=" << f.seed << " " << f.detail << "\n";
    std::cout << "oracle-check: " << o.iterations << " instance(s) per suite, " << failures.size() << " mismatch(es)\n";
    return failures.empty() ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted digraph analytics for banking networks"};
    app.set_config("--config", "", "TOML-style key = value file; command-line flags take precedence");
    app.require_subcommand(1);

    BisOptions bis;
    auto* bis_cmd = app.add_subcommand("bis-analyze", "CON / PageRank / low-key leader analysis of BIS snapshots");
    bis_cmd->add_option("--input", bis.input, "Directory of <period>.csv tables")->required()->check(CLI::ExistingDirectory);
    bis_cmd->add_option("--out", bis.out, "Output directory")->required();
    bis_cmd->add_option("--damping", bis.cfg.pagerank.damping, "PageRank damping factor")->capture_default_str();
    bis_cmd->add_option("--tolerance", bis.cfg.pagerank.tolerance, "PageRank L1 tolerance")->capture_default_str();
    bis_cmd->add_option("--max-iterations", bis.cfg.pagerank.max_iterations, "PageRank iteration cap")->capture_default_str();
    bis_cmd->add_option("--con-combiner", bis.combiner, "Weighted CON combiner")
        ->check(CLI::IsMember({"min", "product", "sum"}))
        ->capture_default_str();
    bis_cmd->add_option("--lkl-c", bis.cfg.thresholds.low_key, "Low-key leader threshold c")->capture_default_str();
    bis_cmd->add_option("--lkl-C", bis.cfg.thresholds.highly_exposed, "Highly-exposed threshold C")->capture_default_str();
    bis_cmd->add_option("--format", bis.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    bis_cmd->add_option("--threads", bis.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    AmlOptions aml;
    auto* aml_cmd = app.add_subcommand("aml-scan", "Sub-threshold cycle and path scan of a transaction edge list");
    aml_cmd->add_option("--input", aml.input, "Transaction CSV: source,target,n,k,y1,y2")->required()->check(CLI::ExistingFile);
    aml_cmd->add_option("--out", aml.out, "Output directory")->required();
    aml_cmd->add_flag("--header", aml.header, "Input has a header row");
    aml_cmd->add_option("--t0", aml.cfg.t0, "Keep edges spanning fewer than t0 years")->capture_default_str();
    aml_cmd->add_option("--amount-threshold", aml.cfg.amount_threshold, "Keep edges averaging below this amount")->capture_default_str();
    aml_cmd->add_option("--min-cycle", aml.cfg.min_cycle_len, "Shortest cycle reported")->capture_default_str();
    aml_cmd->add_option("--max-cycle", aml.cfg.max_cycle_len, "Longest cycle searched")->capture_default_str();
    aml_cmd->add_option("--path-min", aml.cfg.path_len_min, "Shortest path length counted")->capture_default_str();
    aml_cmd->add_option("--path-max", aml.cfg.path_len_max, "Longest path length counted")->capture_default_str();
    aml_cmd->add_option("--min-order", aml.cfg.min_community_order, "Smallest community analysed")->capture_default_str();
    aml_cmd->add_option("--seed", aml.louvain.seed, "Louvain shuffle seed")->capture_default_str();
    aml_cmd->add_option("--resolution", aml.louvain.resolution, "Modularity resolution")->capture_default_str();
    aml_cmd->add_option("--max-passes", aml.louvain.max_passes, "Louvain pass cap")->capture_default_str();
    aml_cmd->add_option("--min-gain", aml.louvain.min_modularity_gain, "Louvain minimum modularity gain")->capture_default_str();
    aml_cmd->add_option("--threads", aml.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    OracleOptions orc;
    auto* orc_cmd = app.add_subcommand("oracle-check", "Compare optimised routines against brute-force references");
    orc_cmd->add_option("--iterations", orc.iterations, "Random instances per suite")->capture_default_str();
    orc_cmd->add_option("--seed", orc.seed, "Base seed")->capture_default_str();
    orc_cmd->add_flag("--inject-fault", orc.inject_fault, "Perturb results to exercise failure reporting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (bis_cmd->parsed()) return run_bis(bis);
        if (aml_cmd->parsed()) return run_aml(aml);
        if (orc_cmd->parsed()) return run_oracle(orc);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitInputError;
}
