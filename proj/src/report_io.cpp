#include "banknet/report_io.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <ostream>

namespace banknet {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

namespace {

// Quotes a CSV field only when needed.
std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

} // namespace

void write_centrality_csv(std::ostream& out, const PeriodReport& r) {
    out << kCentralityCsvHeader << '\n';
    for (std::size_t i = 0; i < r.report.nodes.size(); ++i) {
        const NodeScores& s = r.report.nodes[i];
        out << csv_field(r.period) << ',' << csv_field(r.report.labels[i]) << ',' << format_double(s.con) << ','
            << format_double(s.pagerank) << ',' << format_double(s.con_norm) << ',' << format_double(s.pr_norm) << ','
            << format_double(s.epsilon) << ',' << to_string(s.leader_class) << '\n';
    }
}

void write_centrality_json(std::ostream& out, const PeriodReport& r) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < r.report.nodes.size(); ++i) {
        const NodeScores& s = r.report.nodes[i];
        rows.push_back({{"period", r.period},
                        {"country", r.report.labels[i]},
                        {"con", s.con},
                        {"pagerank", s.pagerank},
                        {"con_norm", s.con_norm},
                        {"pr_norm", s.pr_norm},
                        {"epsilon", s.epsilon},
                        {"class", to_string(s.leader_class)}});
    }
    out << rows.dump(2) << '\n';
}

void write_epsilon_series_csv(std::ostream& out, std::span<const PeriodReport> reports, NodeId country) {
    out << "period,epsilon\n";
    for (const auto& r : reports) out << csv_field(r.period) << ',' << format_double(r.report.nodes.at(country).epsilon) << '\n';
}

void write_leaders_csv(std::ostream& out, std::span<const PeriodReport> reports) {
    out << "period,country,epsilon,class\n";
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.report.nodes.size(); ++i) {
            const auto& s = r.report.nodes[i];
            if (s.leader_class == LeaderClass::Neither) continue;
            out << csv_field(r.period) << ',' << csv_field(r.report.labels[i]) << ',' << format_double(s.epsilon) << ','
                << to_string(s.leader_class) << '\n';
        }
}

void write_partition_csv(std::ostream& out, std::span<const std::string> labels, const Partition& p) {
    out << "account,community_id\n";
    for (NodeId u = 0; u < p.node_count(); ++u) out << csv_field(labels[u]) << ',' << p.community_of(u) << '\n';
}

std::string aml_json(const AmlReport& report) {
    const AmlSummary& s = report.summary;
    ordered_json by_length = ordered_json::object();
    for (const auto& [len, count] : s.cycles_by_length) by_length[std::to_string(len)] = count;

    ordered_json summary = {
        {"accounts", s.accounts},
        {"edges", s.edges},
        {"zero_amount_edges_ignored", s.zero_amount_edges_ignored},
        {"louvain_communities", s.louvain_communities},
        {"louvain_modularity", s.louvain_modularity},
        {"communities", s.communities},
        {"average_community_size", s.average_community_size},
        {"largest_community", s.largest_community},
        {"dropped_accounts", s.dropped_accounts},
        {"community_edges", s.community_edges},
        {"period_filtered_edges", s.period_filtered_edges},
        {"amount_filtered_edges", s.amount_filtered_edges},
        {"cycles", s.cycles},
        {"cycle_communities", s.cycle_communities},
        {"cycle_accounts", s.cycle_accounts},
        {"cycles_by_length", by_length},
        {"length_capped_communities", s.length_capped_communities},
        {"paths", s.paths},
        {"all_shortest_paths", s.all_shortest_paths},
        {"path_accounts", s.path_accounts},
        {"path_cycle_overlap_accounts", s.path_cycle_overlap_accounts},
        {"global_r_value", optional_number(s.global_r_value)},
    };

    ordered_json communities = ordered_json::array();
    for (const auto& f : report.communities) {
        ordered_json cycles = ordered_json::array();
        for (const auto& cyc : f.cycles) {
            ordered_json ids = ordered_json::array();
            for (NodeId u : cyc) ids.push_back(report.accounts[u]);
            cycles.push_back(std::move(ids));
        }
        communities.push_back({{"id", f.id},
                               {"size", f.size},
                               {"filtered_edges", f.filtered_edge_count},
                               {"cycles", std::move(cycles)},
                               {"length_cap_pruned", f.length_cap_pruned},
                               {"path_count", f.path_count},
                               {"all_shortest_path_count", f.all_shortest_path_count},
                               {"path_node_count", f.path_node_count},
                               {"cycle_node_count", f.cycle_node_count},
                               {"overlap_count", f.overlap_count},
                               {"r_value", optional_number(f.r_value)}});
    }

    ordered_json flagged = ordered_json::array();
    for (NodeId u : report.flagged_accounts) flagged.push_back(report.accounts[u]);

    ordered_json doc = {{"summary", std::move(summary)},
                        {"communities", std::move(communities)},
                        {"flagged_accounts", std::move(flagged)}};
    return doc.dump(2) + "\n";
}

void write_aml_json(std::ostream& out, const AmlReport& report) { out << aml_json(report); }

void write_flagged_csv(std::ostream& out, const AmlReport& report) {
    out << "account\n";
    for (NodeId u : report.flagged_accounts) out << csv_field(report.accounts[u]) << '\n';
}

void write_r_values_csv(std::ostream& out, const AmlReport& report) {
    out << "community_id,r_value\n";
    for (const auto& f : report.communities)
        out << f.id << ',' << (f.r_value ? format_double(*f.r_value) : std::string("null")) << '\n';
}

} // namespace banknet
