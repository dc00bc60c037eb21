#include "flowcap/report_io.hpp"

#include <json.hpp>

#include "flowcap/errors.hpp"
#include "flowcap/kv_config.hpp"
#include "flowcap/samples_csv.hpp"

namespace flowcap {

std::string report_to_json(const WorkingAreaReport& report) {
    nlohmann::ordered_json doc;
    doc["working_slope"] = report.working_line.slope;
    doc["working_rms_residual"] = report.working_line.rms_residual;
    doc["working_sample_count"] = report.working_line.sample_count;
    if (report.saturation_line) {
        doc["saturation_intercept"] = report.saturation_line->intercept;
        doc["saturation_slope"] = report.saturation_line->slope;
        doc["saturation_sample_count"] = report.saturation_line->sample_count;
    } else {
        doc["saturation_intercept"] = nullptr;
        doc["saturation_slope"] = nullptr;
        doc["saturation_sample_count"] = nullptr;
    }
    if (report.knee) {
        doc["knee_flows"] = report.knee->flows;
        doc["knee_utilization_percent"] = report.knee->utilization;
    } else {
        doc["knee_flows"] = nullptr;
        doc["knee_utilization_percent"] = nullptr;
    }
    doc["state_counts"] = {{"working", report.state_counts.working},
                           {"moderate", report.state_counts.moderate},
                           {"overloaded", report.state_counts.overloaded}};
    doc["flags"] = report.flags;
    return doc.dump(2) + "\n";
}

void write_labeled_samples_csv(std::span<const LinkSample> samples, const WorkingAreaReport& report,
                               std::ostream& out) {
    if (samples.size() != report.state_labels.size())
        throw InvalidParameters("report labels do not match the sample list");
    out << samples_csv_header << ",state\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out << format_timestamp(samples[i].timestamp) << ',' << format_utilization(samples[i].utilization) << ','
            << samples[i].active_flows << ',' << to_string(report.state_labels[i]) << '\n';
    }
}

void write_fitted_lines_csv(const WorkingAreaReport& report, double max_flows, std::size_t points,
                            std::ostream& out) {
    out << "N,U_working,U_saturation\n";
    if (points < 2)
        points = 2;
    for (std::size_t i = 0; i < points; ++i) {
        const double n = max_flows * static_cast<double>(i) / static_cast<double>(points - 1);
        out << format_double(n) << ',' << format_double(report.working_line.at(n)) << ',';
        if (report.saturation_line)
            out << format_double(report.saturation_line->at(n));
        out << '\n';
    }
}

std::string verdict_line(const WorkingAreaReport& report) {
    if (!report.knee)
        return "working area not exceeded (working slope " + format_double(report.working_line.slope) +
               " %/flow)";
    char buf[160];
    std::snprintf(buf, sizeof buf, "knee at %.1f flows, %.2f%% utilization (working area length)",
                  report.knee->flows, report.knee->utilization);
    return buf;
}

} // namespace flowcap
