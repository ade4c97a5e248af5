#include "banknet/report_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace banknet;
using json = nlohmann::json;

namespace {

const std::string kData = BANKNET_TEST_DATA;

std::vector<TransactionEdge> planted() {
    std::ifstream in(kData + "/transactions/planted.csv");
    REQUIRE(in);
    return parse_transactions(in, true);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("format_double round-trips") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.7706) == "-0.7706");
    for (double v : {1.0 / 3.0, 2.5e-300, 123456789.125, -1e-17}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("centrality CSV and JSON") {
    const auto g = build_graph(std::vector<LabeledEdge>{{"A", "C", 2}, {"B", "C", 3}, {"C", "A", 1}});
    const PeriodReport r{"2006-03", analyze_snapshot(g)};
    std::ostringstream csv;
    write_centrality_csv(csv, r);
    const auto rows = lines(csv.str());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == kCentralityCsvHeader);
    CHECK(rows[1].rfind("2006-03,A,", 0) == 0);

    std::ostringstream js;
    write_centrality_json(js, r);
    const auto doc = json::parse(js.str());
    REQUIRE(doc.size() == 3);
    CHECK(doc[0]["country"] == "A");
    CHECK(doc[0]["con"].get<double>() == r.report.nodes[0].con);
    for (const auto& key : {"period", "country", "con", "pagerank", "con_norm", "pr_norm", "epsilon", "class"})
        CHECK(doc[1].contains(key));
}

TEST_CASE("leader and epsilon series files") {
    const auto g = build_graph(std::vector<LabeledEdge>{{"A", "C", 2}, {"B", "C", 3}, {"C", "A", 1}});
    const std::vector<PeriodReport> reports{{"2006-03", analyze_snapshot(g)}, {"2006-06", analyze_snapshot(g)}};
    std::ostringstream eps;
    write_epsilon_series_csv(eps, reports, 0);
    const auto rows = lines(eps.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "period,epsilon");
    CHECK(rows[1].rfind("2006-03,", 0) == 0);

    std::ostringstream leaders;
    write_leaders_csv(leaders, reports);
    const auto l = lines(leaders.str());
    CHECK(l[0] == "period,country,epsilon,class");
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i].find("NEITHER") == std::string::npos);
}

TEST_CASE("partition CSV quotes awkward labels") {
    std::ostringstream out;
    const std::vector<std::string> labels{"plain", "a,b", "say \"hi\""};
    write_partition_csv(out, labels, Partition::from_assignment({0, 0, 1}));
    CHECK(out.str() == "account,community_id\nplain,0\n\"a,b\",0\n\"say \"\"hi\"\"\",1\n");
}

TEST_CASE("AML report schema") {
    const auto report = run_aml_pipeline(planted());
    const auto doc = json::parse(aml_json(report));
    REQUIRE(doc.contains("summary"));
    const auto& s = doc["summary"];
    for (const auto& key : {"accounts", "edges", "zero_amount_edges_ignored", "louvain_communities", "louvain_modularity",
                            "communities", "average_community_size", "largest_community", "dropped_accounts",
                            "community_edges", "period_filtered_edges", "amount_filtered_edges", "cycles",
                            "cycle_communities", "cycle_accounts", "cycles_by_length", "length_capped_communities", "paths",
                            "all_shortest_paths", "path_accounts", "path_cycle_overlap_accounts", "global_r_value"})
        CHECK_MESSAGE(s.contains(key), key);
    CHECK(s["accounts"] == report.summary.accounts);
    CHECK(s["cycles"] == 1);
    CHECK(s["cycles_by_length"]["4"] == 1);

    REQUIRE(doc["communities"].size() == 1);
    const auto& c = doc["communities"][0];
    for (const auto& key : {"id", "size", "filtered_edges", "cycles", "length_cap_pruned", "path_count",
                            "all_shortest_path_count", "path_node_count", "cycle_node_count", "overlap_count", "r_value"})
        CHECK_MESSAGE(c.contains(key), key);
    CHECK(c["r_value"].is_null());
    CHECK(c["cycles"][0].size() == 4);
    CHECK(c["cycles"][0][0].is_string());
    auto flagged = doc["flagged_accounts"].get<std::vector<std::string>>();
    std::sort(flagged.begin(), flagged.end());
    CHECK(flagged == std::vector<std::string>{"c0", "c3", "c6", "c8"});

    std::ostringstream rv;
    write_r_values_csv(rv, report);
    CHECK(rv.str() == "community_id,r_value\n" + std::to_string(report.communities[0].id) + ",null\n");

    std::ostringstream fl;
    write_flagged_csv(fl, report);
    auto rows = lines(fl.str());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "account");
    std::sort(rows.begin() + 1, rows.end());
    CHECK(rows == std::vector<std::string>{"account", "c0", "c3", "c6", "c8"});
}

TEST_CASE("empty AML report serialises") {
    const auto doc = json::parse(aml_json(run_aml_pipeline(std::vector<TransactionEdge>{})));
    CHECK(doc["summary"]["accounts"] == 0);
    CHECK(doc["summary"]["global_r_value"].is_null());
    CHECK(doc["communities"].empty());
    CHECK(doc["flagged_accounts"].empty());
}
