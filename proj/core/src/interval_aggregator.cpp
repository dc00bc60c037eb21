#include "flowcap/interval_aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flowcap/errors.hpp"

namespace flowcap {

namespace {

std::int64_t interval_of(double t, double width) { return static_cast<std::int64_t>(std::floor(t / width)); }

// Calls visit(index, octet_share) for each interval the flow occupies. The
// last share is the remainder, so shares always sum to the flow's octets.
template <typename Visit>
void spread(const TimedFlow& flow, double width, Visit&& visit) {
    const std::int64_t begin = interval_of(flow.first, width);
    if (!(flow.last > flow.first)) {
        visit(begin, flow.octets);
        return;
    }
    const std::int64_t end = std::max(begin, static_cast<std::int64_t>(std::ceil(flow.last / width)) - 1);
    const double span = flow.last - flow.first;
    double assigned = 0.0;
    for (std::int64_t k = begin; k < end; ++k) {
        const double lo = std::max(flow.first, static_cast<double>(k) * width);
        const double hi = std::min(flow.last, static_cast<double>(k + 1) * width);
        const double share = hi > lo ? flow.octets * ((hi - lo) / span) : 0.0;
        assigned += share;
        visit(k, share);
    }
    visit(end, flow.octets - assigned);
}

} // namespace

void IngestConfig::validate() const {
    if (!(std::isfinite(interval) && interval > 0.0))
        throw ConfigError("ingest.interval", "must be > 0");
    if (!(std::isfinite(link_capacity) && link_capacity > 0.0))
        throw ConfigError("ingest.capacity", "must be > 0");
}

TimedFlow make_timed_flow(const netflow::V5Header& header, const netflow::V5Record& record,
                          bool apply_sampling_correction) {
    const auto span = netflow::to_absolute_time(header, record);
    TimedFlow flow{span.first, span.last, static_cast<double>(record.octets), record.input_if, record.output_if};
    if (apply_sampling_correction && header.sampling_rate() > 1)
        flow.octets *= header.sampling_rate();
    return flow;
}

bool selected(const TimedFlow& flow, const IngestConfig& config) noexcept {
    if (!config.interface_filter)
        return true;
    const auto& filter = *config.interface_filter;
    const bool in = filter.contains(flow.input_if);
    const bool out = filter.contains(flow.output_if);
    switch (config.direction) {
    case Direction::Input: return in;
    case Direction::Output: return out;
    case Direction::Both: return in || out;
    }
    return false;
}

std::vector<IntervalTotals> attribute(std::span<const TimedFlow> flows, const IngestConfig& config) {
    config.validate();
    std::map<std::int64_t, IntervalTotals> totals;
    for (const auto& flow : flows) {
        if (!selected(flow, config))
            continue;
        spread(flow, config.interval, [&](std::int64_t k, double octets) {
            auto& t = totals[k];
            t.index = k;
            t.octets += octets;
            ++t.active_flows;
        });
    }
    std::vector<IntervalTotals> out;
    if (totals.empty())
        return out;
    const std::int64_t first = totals.begin()->first;
    const std::int64_t last = totals.rbegin()->first;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t k = first; k <= last; ++k) {
        const auto it = totals.find(k);
        out.push_back(it != totals.end() ? it->second : IntervalTotals{k, 0.0, 0});
    }
    return out;
}

LinkSample to_sample(const IntervalTotals& totals, const IngestConfig& config) {
    LinkSample s;
    s.timestamp = static_cast<double>(totals.index) * config.interval;
    s.utilization = 100.0 * (8.0 * totals.octets) / (config.interval * config.link_capacity);
    s.active_flows = totals.active_flows;
    return s;
}

std::vector<LinkSample> aggregate(std::span<const TimedFlow> flows, const IngestConfig& config) {
    const auto totals = attribute(flows, config);
    std::vector<LinkSample> samples;
    samples.reserve(totals.size());
    for (const auto& t : totals)
        samples.push_back(to_sample(t, config));
    return samples;
}

StreamingAggregator::StreamingAggregator(IngestConfig config)
    : config_(std::move(config)), watermark_(-std::numeric_limits<double>::infinity()) {
    config_.validate();
}

void StreamingAggregator::add(const TimedFlow& flow) {
    if (!selected(flow, config_))
        return;
    bool late = false;
    spread(flow, config_.interval, [&](std::int64_t k, double octets) {
        if (next_emit_ && k < *next_emit_) {
            late = true;
            return;
        }
        auto& t = open_[k];
        t.index = k;
        t.octets += octets;
        ++t.active_flows;
    });
    if (late)
        ++late_records_;
    watermark_ = std::max(watermark_, flow.last);
}

std::vector<LinkSample> StreamingAggregator::emit_through(std::int64_t last_index) {
    std::vector<LinkSample> out;
    if (!next_emit_) {
        if (open_.empty())
            return out;
        next_emit_ = open_.begin()->first;
    }
    for (; *next_emit_ <= last_index; ++*next_emit_) {
        const auto it = open_.find(*next_emit_);
        if (it != open_.end()) {
            out.push_back(to_sample(it->second, config_));
            open_.erase(it);
        } else {
            out.push_back(to_sample(IntervalTotals{*next_emit_, 0.0, 0}, config_));
        }
    }
    return out;
}

std::vector<LinkSample> StreamingAggregator::drain() {
    if (!std::isfinite(watermark_))
        return {};
    const auto closed_before = interval_of(watermark_, config_.interval) -
                               static_cast<std::int64_t>(config_.lateness_intervals);
    return emit_through(closed_before - 1);
}

std::vector<LinkSample> StreamingAggregator::finish() {
    if (open_.empty())
        return {};
    return emit_through(open_.rbegin()->first);
}

} // namespace flowcap
