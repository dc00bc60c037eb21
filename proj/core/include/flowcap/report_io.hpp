#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "flowcap/capacity_analyzer.hpp"

namespace flowcap {

/// JSON document with keys working_slope, working_rms_residual,
/// working_sample_count, saturation_intercept, saturation_slope,
/// saturation_sample_count, knee_flows, knee_utilization_percent,
/// state_counts {working, moderate, overloaded} and flags. Absent fits and
/// knees are null. Output is byte-stable for equal reports.
std::string report_to_json(const WorkingAreaReport& report);

/// `timestamp,utilization_percent,active_flows,state` for every sample.
void write_labeled_samples_csv(std::span<const LinkSample> samples, const WorkingAreaReport& report,
                               std::ostream& out);

/// `N,U_working,U_saturation` on an even grid from 0 to `max_flows`
/// (`points` rows). U_saturation is empty when there is no saturation line.
void write_fitted_lines_csv(const WorkingAreaReport& report, double max_flows, std::size_t points,
                            std::ostream& out);

/// One-line human summary: the knee, or "working area not exceeded".
std::string verdict_line(const WorkingAreaReport& report);

} // namespace flowcap
