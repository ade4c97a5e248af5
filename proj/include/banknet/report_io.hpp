#pragma once

// Text serialisations of analysis results. Doubles are written in shortest
// round-trip form so files are byte-stable and lossless.

#include "banknet/aml.hpp"
#include "banknet/centrality.hpp"
#include "banknet/community.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace banknet {

std::string format_double(double v);

inline constexpr std::string_view kCentralityCsvHeader = "period,country,con,pagerank,con_norm,pr_norm,epsilon,class";

/// Header plus one row per node.
void write_centrality_csv(std::ostream& out, const PeriodReport& report);
/// Array of objects with the CSV fields, one per node.
void write_centrality_json(std::ostream& out, const PeriodReport& report);

/// `period,epsilon` rows for one country across the series.
void write_epsilon_series_csv(std::ostream& out, std::span<const PeriodReport> reports, NodeId country);
/// `period,country,epsilon,class` for every node not classed NEITHER.
void write_leaders_csv(std::ostream& out, std::span<const PeriodReport> reports);

/// `account,community_id`.
void write_partition_csv(std::ostream& out, std::span<const std::string> labels, const Partition& p);

/// {summary, communities, flagged_accounts}.
void write_aml_json(std::ostream& out, const AmlReport& report);
std::string aml_json(const AmlReport& report);
/// `account` header then one flagged account per line.
void write_flagged_csv(std::ostream& out, const AmlReport& report);
/// `community_id,r_value`, with `null` for undefined values.
void write_r_values_csv(std::ostream& out, const AmlReport& report);

} // namespace banknet
