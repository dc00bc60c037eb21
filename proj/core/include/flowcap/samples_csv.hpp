#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowcap/link_sample.hpp"

namespace flowcap {

// Shared sample file:
//
//   timestamp,utilization_percent,active_flows
//   1700000000,45.5,2500
//
// Timestamps are epoch seconds, written as integers when integral. Sub-second
// grids (simulation output) fall back to the shortest exact decimal.
// Utilization carries at most 6 fractional digits; active_flows is a
// non-negative integer.

inline constexpr std::string_view samples_csv_header = "timestamp,utilization_percent,active_flows";

std::string format_timestamp(double timestamp);
/// Rounds to 6 fractional digits and trims trailing zeros.
std::string format_utilization(double utilization);

void write_samples_csv(std::span<const LinkSample> samples, std::ostream& out);
void write_samples_csv(std::span<const LinkSample> samples, const std::filesystem::path& path);

struct SamplesCsv {
    std::vector<LinkSample> samples; ///< sorted by timestamp
    /// Rows that arrived out of timestamp order and were re-sorted. Non-zero
    /// is a warning, not an error.
    std::size_t out_of_order_rows = 0;
};

/// Throws MalformedRow with the line number for any schema violation.
SamplesCsv read_samples_csv(std::istream& in);
SamplesCsv read_samples_csv(const std::filesystem::path& path);

} // namespace flowcap
