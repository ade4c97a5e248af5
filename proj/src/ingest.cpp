#include "banknet/ingest.hpp"

#include "banknet/error.hpp"
#include "banknet/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace banknet {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

// Splits one CSV line, honouring double quotes ("" is an escaped quote).
std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.emplace_back(trim(cur));
    return fields;
}

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return value;
}

std::optional<double> parse_amount(std::string_view cell, std::string_view source, std::size_t line) {
    if (cell.empty() || cell == "-") return std::nullopt;
    std::string digits;
    digits.reserve(cell.size());
    for (char c : cell)
        if (c != ',' && c != ' ') digits.push_back(c);
    auto v = parse_number<double>(digits);
    if (!v || *v < 0.0 || !std::isfinite(*v))
        throw Error(ErrorKind::UnparseableAmount, where(source, line) + ": cannot read amount '" + std::string(cell) + "'");
    return v;
}

// Reads non-blank lines, stripping a UTF-8 byte-order mark from the first.
template <class F>
void for_each_line(std::istream& in, F&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        fn(std::string_view(line), number);
    }
}

bool is_csv(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv";
}

} // namespace

BisTable parse_bis_csv(std::istream& in, std::string_view source) {
    BisTable t;
    bool have_header = false;
    std::unordered_set<std::string> seen_debtors;
    for_each_line(in, [&](std::string_view line, std::size_t number) {
        auto fields = split_csv(line);
        if (!have_header) {
            have_header = true;
            std::unordered_set<std::string> seen;
            for (std::size_t i = 1; i < fields.size(); ++i) {
                if (fields[i].empty())
                    throw Error(ErrorKind::MalformedRow, where(source, number) + ": empty lender label");
                if (!seen.insert(fields[i]).second)
                    throw Error(ErrorKind::MalformedRow, where(source, number) + ": lender '" + fields[i] + "' repeated");
                t.lenders.push_back(fields[i]);
            }
            return;
        }
        if (fields.size() != t.lenders.size() + 1)
            throw Error(ErrorKind::MalformedRow, where(source, number) + ": expected " +
                                                     std::to_string(t.lenders.size() + 1) + " cells, found " +
                                                     std::to_string(fields.size()));
        const std::string& debtor = fields[0];
        if (debtor.empty()) throw Error(ErrorKind::MalformedRow, where(source, number) + ": empty debtor label");
        if (!seen_debtors.insert(debtor).second)
            throw Error(ErrorKind::MalformedRow, where(source, number) + ": debtor '" + debtor + "' repeated");
        std::vector<std::optional<double>> row;
        row.reserve(t.lenders.size());
        for (std::size_t i = 0; i < t.lenders.size(); ++i) {
            auto amount = parse_amount(fields[i + 1], source, number);
            if (t.lenders[i] == debtor && amount && *amount > 0.0)
                throw Error(ErrorKind::MalformedRow, where(source, number) + ": '" + debtor + "' has a claim on itself");
            row.push_back(amount);
        }
        t.debtors.push_back(debtor);
        t.cells.push_back(std::move(row));
    });
    if (!have_header) throw Error(ErrorKind::MalformedRow, std::string(source) + ": missing header row");
    return t;
}

BisTable parse_bis_csv_text(std::string_view text, std::string_view source) {
    std::istringstream in{std::string(text)};
    return parse_bis_csv(in, source);
}

std::vector<std::string> bis_labels(const BisTable& t) {
    std::vector<std::string> labels = t.lenders;
    std::unordered_set<std::string> seen(labels.begin(), labels.end());
    for (const auto& d : t.debtors)
        if (seen.insert(d).second) labels.push_back(d);
    return labels;
}

WeightedDigraph bis_to_graph(const BisTable& t) { return bis_to_graph(t, bis_labels(t)); }

WeightedDigraph bis_to_graph(const BisTable& t, std::vector<std::string> universe) {
    std::vector<LabeledEdge> triples;
    for (std::size_t r = 0; r < t.debtors.size(); ++r)
        for (std::size_t c = 0; c < t.lenders.size(); ++c)
            if (const auto& cell = t.cells[r][c]; cell && *cell > 0.0)
                triples.push_back({t.debtors[r], t.lenders[c], *cell});
    return build_graph(std::move(universe), triples);
}

SnapshotSeries load_snapshot_series(const std::filesystem::path& dir, unsigned threads) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw Error(ErrorKind::Io, "'" + dir.string() + "' is not a readable directory");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_csv(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::set<std::string> periods;
    for (const auto& f : files)
        if (!periods.insert(f.stem().string()).second)
            throw Error(ErrorKind::DuplicatePeriod, "period '" + f.stem().string() + "' appears twice in " + dir.string());

    std::vector<BisTable> tables(files.size());
    parallel_for(files.size(), threads, [&](std::size_t i) {
        std::ifstream in(files[i]);
        if (!in) throw Error(ErrorKind::Io, "cannot open '" + files[i].string() + "'");
        tables[i] = parse_bis_csv(in, files[i].string());
    });

    std::set<std::string> universe;
    for (const auto& t : tables) {
        universe.insert(t.lenders.begin(), t.lenders.end());
        universe.insert(t.debtors.begin(), t.debtors.end());
    }
    const std::vector<std::string> labels(universe.begin(), universe.end());

    std::vector<Snapshot> snapshots(files.size());
    for (std::size_t i = 0; i < files.size(); ++i)
        snapshots[i] = {files[i].stem().string(), bis_to_graph(tables[i], labels)};
    return SnapshotSeries(std::move(snapshots));
}

std::vector<TransactionEdge> merge_transactions(std::span<const TransactionEdge> records) {
    std::vector<TransactionEdge> merged;
    std::unordered_map<std::string, std::size_t> slot;
    for (const TransactionEdge& r : records) {
        // '\x1f' cannot appear in a trimmed CSV field, so the key is unambiguous.
        std::string key = r.source + '\x1f' + r.target;
        auto [it, inserted] = slot.emplace(std::move(key), merged.size());
        if (inserted) {
            merged.push_back(r);
            continue;
        }
        TransactionEdge& m = merged[it->second];
        m.count += r.count;
        m.amount += r.amount;
        m.start_year = std::min(m.start_year, r.start_year);
        m.end_year = std::max(m.end_year, r.end_year);
    }
    return merged;
}

std::vector<TransactionEdge> parse_transactions(std::istream& in, bool has_header, std::string_view source) {
    std::vector<TransactionEdge> records;
    bool skip = has_header;
    for_each_line(in, [&](std::string_view line, std::size_t number) {
        if (skip) {
            skip = false;
            return;
        }
        auto f = split_csv(line);
        auto bad = [&](const std::string& why) {
            return Error(ErrorKind::UnparseableRecord, where(source, number) + ": " + why);
        };
        if (f.size() != 6) throw bad("expected 6 fields, found " + std::to_string(f.size()));
        if (f[0].empty() || f[1].empty()) throw bad("empty account identifier");
        if (f[0] == f[1]) throw Error(ErrorKind::SelfLoop, where(source, number) + ": account '" + f[0] + "' pays itself");
        auto n = parse_number<std::uint64_t>(f[2]);
        auto k = parse_number<double>(f[3]);
        auto y1 = parse_number<int>(f[4]);
        auto y2 = parse_number<int>(f[5]);
        if (!n || *n == 0) throw bad("transaction count '" + f[2] + "' must be a positive integer");
        if (!k || *k < 0.0 || !std::isfinite(*k)) throw bad("amount '" + f[3] + "' must be a non-negative number");
        if (!y1 || !y2) throw bad("years must be integers");
        if (*y1 > *y2)
            throw Error(ErrorKind::YearOrderViolation,
                        where(source, number) + ": start year " + f[4] + " after end year " + f[5]);
        records.push_back({std::move(f[0]), std::move(f[1]), *n, *k, *y1, *y2});
    });
    return merge_transactions(records);
}

std::vector<TransactionEdge> parse_transactions_text(std::string_view text, bool has_header, std::string_view source) {
    std::istringstream in{std::string(text)};
    return parse_transactions(in, has_header, source);
}

} // namespace banknet
