#include "flowcap/samples_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "flowcap/errors.hpp"
#include "flowcap/kv_config.hpp"

namespace flowcap {

std::string format_timestamp(double timestamp) {
    if (std::isfinite(timestamp) && std::trunc(timestamp) == timestamp && std::abs(timestamp) < 0x1.0p53) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(timestamp));
        return std::string(buf, res.ptr);
    }
    return format_double(timestamp);
}

std::string format_utilization(double utilization) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", utilization);
    std::string out(buf);
    const auto dot = out.find('.');
    if (dot != std::string::npos) {
        const auto last = out.find_last_not_of('0');
        out.erase(last == dot ? dot : last + 1);
    }
    if (out == "-0")
        out = "0";
    return out;
}

void write_samples_csv(std::span<const LinkSample> samples, std::ostream& out) {
    out << samples_csv_header << '\n';
    for (const auto& s : samples)
        out << format_timestamp(s.timestamp) << ',' << format_utilization(s.utilization) << ',' << s.active_flows
            << '\n';
}

void write_samples_csv(std::span<const LinkSample> samples, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write samples file '" + path.string() + "'");
    write_samples_csv(samples, out);
    if (!out)
        throw Error("failed writing samples file '" + path.string() + "'");
}

namespace {

LinkSample parse_row(std::string_view line, std::size_t line_no) {
    std::string_view fields[3];
    std::size_t count = 0;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (count == 3)
            throw MalformedRow(line_no, "expected 3 fields");
        fields[count++] = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    if (count != 3)
        throw MalformedRow(line_no, "expected 3 fields, got " + std::to_string(count));

    LinkSample sample;
    const auto timestamp = parse_double(fields[0]);
    if (!timestamp || !std::isfinite(*timestamp) || *timestamp < 0.0)
        throw MalformedRow(line_no, "timestamp '" + std::string(fields[0]) + "' is not a non-negative number");
    sample.timestamp = *timestamp;

    const auto utilization = parse_double(fields[1]);
    if (!utilization || !std::isfinite(*utilization) || *utilization < 0.0)
        throw MalformedRow(line_no, "utilization_percent '" + std::string(fields[1]) + "' is not a number >= 0");
    sample.utilization = *utilization;

    const auto flows = fields[2];
    const auto res = std::from_chars(flows.data(), flows.data() + flows.size(), sample.active_flows);
    if (flows.empty() || res.ec != std::errc{} || res.ptr != flows.data() + flows.size())
        throw MalformedRow(line_no, "active_flows '" + std::string(flows) + "' is not a non-negative integer");
    return sample;
}

} // namespace

SamplesCsv read_samples_csv(std::istream& in) {
    SamplesCsv result;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!saw_header) {
            if (line != samples_csv_header)
                throw MalformedRow(line_no, "expected header '" + std::string(samples_csv_header) + "'");
            saw_header = true;
            continue;
        }
        const auto sample = parse_row(line, line_no);
        if (!result.samples.empty() && sample.timestamp < result.samples.back().timestamp)
            ++result.out_of_order_rows;
        result.samples.push_back(sample);
    }
    if (!saw_header)
        throw MalformedRow(1, "missing header line");
    if (result.out_of_order_rows > 0) {
        std::stable_sort(result.samples.begin(), result.samples.end(),
                         [](const LinkSample& a, const LinkSample& b) { return a.timestamp < b.timestamp; });
    }
    return result;
}

SamplesCsv read_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open samples file '" + path.string() + "'");
    return read_samples_csv(in);
}

} // namespace flowcap
