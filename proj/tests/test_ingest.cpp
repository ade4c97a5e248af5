#include "banknet/error.hpp"
#include "banknet/ingest.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

using namespace banknet;
namespace fs = std::filesystem;

namespace {

const fs::path kData = BANKNET_TEST_DATA;

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected banknet::Error");
    return ErrorKind::Io;
}

BisTable extract() {
    std::ifstream in(kData / "extract" / "2002-06.csv");
    REQUIRE(in);
    return parse_bis_csv(in, "2002-06.csv");
}

std::optional<double> cell(const BisTable& t, const std::string& debtor, const std::string& lender) {
    const auto r = std::find(t.debtors.begin(), t.debtors.end(), debtor) - t.debtors.begin();
    const auto c = std::find(t.lenders.begin(), t.lenders.end(), lender) - t.lenders.begin();
    return t.cells.at(r).at(c);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string& file, const std::string& text) const { std::ofstream(path / file) << text; }
};

} // namespace

TEST_CASE("BIS rows parse into debtor-by-lender cells") {
    const auto t = parse_bis_csv_text("Country,Austria,Belgium,Canada,Denmark\nAustria,-,3179,1467,179\nFrance,1665,43141,4742,827\n");
    CHECK(t.lenders == std::vector<std::string>{"Austria", "Belgium", "Canada", "Denmark"});
    CHECK(t.debtors == std::vector<std::string>{"Austria", "France"});
    CHECK_FALSE(cell(t, "Austria", "Austria").has_value());
    CHECK(cell(t, "Austria", "Belgium") == 3179.0);
    CHECK(cell(t, "Austria", "Canada") == 1467.0);
    CHECK(cell(t, "Austria", "Denmark") == 179.0);
    CHECK(cell(t, "France", "Belgium") == 43141.0);
}

TEST_CASE("published table extract with quoted thousands separators") {
    const auto t = extract();
    CHECK(t.debtors.size() == 7);
    CHECK(cell(t, "USA", "Canada") == 186122.0);
    CHECK(cell(t, "UK", "Denmark") == 9781.0);

    const auto g = bis_to_graph(t);
    CHECK(g.node_count() == 7);
    CHECK(g.weight(g.id_of("USA"), g.id_of("Canada")) == 186122.0);
    CHECK(g.out_weight(g.id_of("USA")) == 186122.0 + 54947.0 + 3355.0 + 3364.0);
    // no self-loops and total weight equals the sum of positive cells
    double cells = 0.0;
    for (const auto& row : t.cells)
        for (const auto& c : row)
            if (c && *c > 0) cells += *c;
    CHECK(g.total_weight() == cells);
    g.for_each_edge([](NodeId u, NodeId v, double) { CHECK(u != v); });
}

TEST_CASE("bis_to_graph edge cases") {
    const auto empty = bis_to_graph(parse_bis_csv_text("Country,A,B\nA,-,\nB,-,-\nC,0,-\n"));
    CHECK(empty.node_count() == 3);
    CHECK(empty.edge_count() == 0);

    const auto one = bis_to_graph(parse_bis_csv_text("Country,B\nA,7\n"));
    CHECK(one.edge_count() == 1);
    CHECK(one.weight(one.id_of("A"), one.id_of("B")) == 7.0);
}

TEST_CASE("BIS parse errors") {
    CHECK(kind_of([] { parse_bis_csv_text("Country,A,B,C\nX,1,2\n"); }) == ErrorKind::MalformedRow);
    CHECK(kind_of([] { parse_bis_csv_text("Country,A,B\nX,1,abc\n"); }) == ErrorKind::UnparseableAmount);
    CHECK(kind_of([] { parse_bis_csv_text("Country,A,B\nX,1,-5\n"); }) == ErrorKind::UnparseableAmount);
    CHECK(kind_of([] { parse_bis_csv_text("Country,A,B\nA,3,1\n"); }) == ErrorKind::MalformedRow);
    CHECK(kind_of([] { parse_bis_csv_text(""); }) == ErrorKind::MalformedRow);
    try {
        parse_bis_csv_text("Country,A\nX,1\nY\n", "q.csv");
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("q.csv:3") != std::string::npos);
    }
}

TEST_CASE("labels are trimmed and matched case-sensitively") {
    const auto t = parse_bis_csv_text("Country, usa ,USA\n UK ,1,2\n");
    CHECK(t.lenders == std::vector<std::string>{"usa", "USA"});
    CHECK(t.debtors == std::vector<std::string>{"UK"});
}

TEST_CASE("transaction records") {
    SUBCASE("direct parse") {
        const auto e = parse_transactions_text("a1,a2,3,4500,2012,2012\n");
        REQUIRE(e.size() == 1);
        CHECK(e[0] == TransactionEdge{"a1", "a2", 3, 4500, 2012, 2012});
    }
    SUBCASE("repeated pairs merge") {
        const auto e = parse_transactions_text("a1,a2,1,100,2011,2011\nb,c,1,1,2000,2000\na1,a2,2,200,2013,2014\n");
        REQUIRE(e.size() == 2);
        CHECK(e[0] == TransactionEdge{"a1", "a2", 3, 300, 2011, 2014});
        CHECK(e[1].source == "b");
    }
    SUBCASE("header is skipped on request") {
        CHECK(parse_transactions_text("source,target,n,k,y1,y2\na,b,1,2,2000,2000\n", true).size() == 1);
        CHECK(kind_of([] { parse_transactions_text("source,target,n,k,y1,y2\n"); }) == ErrorKind::UnparseableRecord);
    }
    SUBCASE("errors") {
        CHECK(kind_of([] { parse_transactions_text("a1,a2,1,100,2015,2012\n"); }) == ErrorKind::YearOrderViolation);
        CHECK(kind_of([] { parse_transactions_text("a1,a2,0,100,2012,2012\n"); }) == ErrorKind::UnparseableRecord);
        CHECK(kind_of([] { parse_transactions_text("a1,a2,1,-1,2012,2012\n"); }) == ErrorKind::UnparseableRecord);
        CHECK(kind_of([] { parse_transactions_text("a1,a2,1,100,2012\n"); }) == ErrorKind::UnparseableRecord);
        CHECK(kind_of([] { parse_transactions_text("a1,a1,1,100,2012,2012\n"); }) == ErrorKind::SelfLoop);
    }
}

TEST_CASE("merged counts equal raw record counts per pair") {
    std::string text;
    std::map<std::pair<std::string, std::string>, std::uint64_t> raw;
    for (int i = 0; i < 300; ++i) {
        const std::string s = "s" + std::to_string(i % 7), t = "t" + std::to_string((i * 5) % 11);
        const int n = 1 + i % 4;
        text += s + "," + t + "," + std::to_string(n) + ",10," + std::to_string(2000 + i % 5) + ",2010\n";
        raw[{s, t}] += static_cast<std::uint64_t>(n);
    }
    const auto merged = parse_transactions_text(text);
    CHECK(merged.size() == raw.size());
    for (const auto& e : merged) CHECK(e.count == raw.at({e.source, e.target}));
}

TEST_CASE("snapshot series from a directory") {
    const auto series = load_snapshot_series(kData / "quarters", 2);
    REQUIRE(series.size() == 3);
    CHECK(series[0].period == "2005-12");
    CHECK(series[1].period == "2006-03");
    CHECK(series[2].period == "2006-06");
    // union universe, sorted
    const std::vector<std::string> universe{"France", "Germany", "Italy", "UK", "USA"};
    for (const auto& s : series) CHECK(std::vector<std::string>(s.graph.labels().begin(), s.graph.labels().end()) == universe);
    CHECK(series[0].graph.out_degree(series[0].graph.id_of("Italy")) == 0);

    TempDir one("banknet_series_one");
    one.write("2006-03.csv", "Country,A\nB,1\n");
    CHECK(load_snapshot_series(one.path).size() == 1);

    TempDir dup("banknet_series_dup");
    dup.write("2006-03.csv", "Country,A\nB,1\n");
    dup.write("2006-03.CSV", "Country,A\nB,2\n");
    CHECK(kind_of([&] { load_snapshot_series(dup.path); }) == ErrorKind::DuplicatePeriod);

    TempDir bad("banknet_series_bad");
    bad.write("2006-03.csv", "Country,A\nB,1,2\n");
    CHECK(kind_of([&] { load_snapshot_series(bad.path, 4); }) == ErrorKind::MalformedRow);

    CHECK(kind_of([] { load_snapshot_series("/nonexistent/banknet"); }) == ErrorKind::Io);
}

TEST_CASE("62 quarterly files give 62 increasing periods") {
    TempDir dir("banknet_series_62");
    for (int i = 0; i < 62; ++i) {
        const int year = 2000 + i / 4, month = 3 * (i % 4) + 3;
        char name[16];
        std::snprintf(name, sizeof name, "%04d-%02d.csv", year, month);
        dir.write(name, "Country,A,B\nA,-," + std::to_string(i + 1) + "\nB,1,-\n");
    }
    const auto series = load_snapshot_series(dir.path, 4);
    REQUIRE(series.size() == 62);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i - 1].period < series[i].period);
}
