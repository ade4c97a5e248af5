#pragma once

// Readers for the two input formats: BIS-style quarterly claim tables and
// account-to-account transaction edge lists.

#include "banknet/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace banknet {

/// Rows are debtor countries, columns are lender countries. A cell holds the
/// amount (millions of USD) the row country owes the column country.
struct BisTable {
    std::vector<std::string> lenders;
    std::vector<std::string> debtors;
    std::vector<std::vector<std::optional<double>>> cells; // cells[debtor][lender]
};

/// Header row `Country,<lender>,...`, then `<debtor>,<cell>,...`. Cells are a
/// number (quoted thousands separators allowed), "-" or empty.
/// `source` only labels diagnostics.
BisTable parse_bis_csv(std::istream& in, std::string_view source = "<input>");
BisTable parse_bis_csv_text(std::string_view text, std::string_view source = "<input>");

/// Every label appearing as lender or debtor, lenders first, in table order.
std::vector<std::string> bis_labels(const BisTable& t);

/// Edge debtor -> lender for every strictly positive cell.
WeightedDigraph bis_to_graph(const BisTable& t);
WeightedDigraph bis_to_graph(const BisTable& t, std::vector<std::string> universe);

/// Reads every `<period>.csv` in dir. The label universe is the sorted union
/// of all countries across files; snapshots are sorted by period.
SnapshotSeries load_snapshot_series(const std::filesystem::path& dir, unsigned threads = 1);

/// One merged account pair: n transactions totalling `amount` between
/// start_year and end_year inclusive.
struct TransactionEdge {
    std::string source;
    std::string target;
    std::uint64_t count = 1;
    double amount = 0.0;
    int start_year = 0;
    int end_year = 0;

    [[nodiscard]] double average_amount() const noexcept { return amount / static_cast<double>(count); }
    [[nodiscard]] int span_years() const noexcept { return end_year - start_year; }

    friend bool operator==(const TransactionEdge&, const TransactionEdge&) = default;
};

/// `source,target,n,k,y1,y2` per line. Repeated ordered pairs are merged:
/// n and k summed, years widened to [min y1, max y2]. Output keeps the order
/// in which pairs first appear.
std::vector<TransactionEdge> parse_transactions(std::istream& in, bool has_header = false,
                                                std::string_view source = "<input>");
std::vector<TransactionEdge> parse_transactions_text(std::string_view text, bool has_header = false,
                                                     std::string_view source = "<input>");

/// Merge rule applied by parse_transactions, exposed for callers that build
/// edge lists in memory.
std::vector<TransactionEdge> merge_transactions(std::span<const TransactionEdge> records);

} // namespace banknet
