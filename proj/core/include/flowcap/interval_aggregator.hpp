#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "flowcap/link_sample.hpp"
#include "flowcap/netflow_v5.hpp"

namespace flowcap {

enum class Direction { Input, Output, Both };

struct IngestConfig {
    double interval = 1800.0;   ///< seconds per sample
    double link_capacity = 0.0; ///< bits/s
    /// Interfaces to keep; every record is kept when unset.
    std::optional<std::set<std::uint16_t>> interface_filter;
    Direction direction = Direction::Both;
    /// Multiply octets by the header's sampling rate (off by default).
    bool apply_sampling_correction = false;
    /// Whole intervals a streaming aggregator waits for late records.
    std::size_t lateness_intervals = 1;

    /// Throws ConfigError (ingest.interval, ingest.capacity).
    void validate() const;
};

/// A flow record reduced to what aggregation needs, on absolute time.
struct TimedFlow {
    double first = 0.0; ///< epoch seconds
    double last = 0.0;  ///< epoch seconds
    double octets = 0.0;
    std::uint16_t input_if = 0;
    std::uint16_t output_if = 0;
};

TimedFlow make_timed_flow(const netflow::V5Header& header, const netflow::V5Record& record,
                          bool apply_sampling_correction = false);

bool selected(const TimedFlow& flow, const IngestConfig& config) noexcept;

/// Octets and active flows attributed to interval [index*D, (index+1)*D).
struct IntervalTotals {
    std::int64_t index = 0;
    double octets = 0.0;
    std::uint64_t active_flows = 0;
};

/// Per-interval attribution over a contiguous index range covering every
/// selected flow. A flow occupies [first, last) and is active in every
/// interval that range overlaps; its octets are spread uniformly over the
/// span. A zero-length flow lands entirely in the interval containing it.
std::vector<IntervalTotals> attribute(std::span<const TimedFlow> flows, const IngestConfig& config);

LinkSample to_sample(const IntervalTotals& totals, const IngestConfig& config);

/// attribute() converted to samples: timestamp = interval start,
/// utilization = 100 * 8 * octets / (interval * capacity).
std::vector<LinkSample> aggregate(std::span<const TimedFlow> flows, const IngestConfig& config);

/// Incremental form of aggregate() for live collection. Intervals are emitted
/// once the newest `last` seen is `lateness_intervals` beyond their end.
/// Contributions to already-emitted intervals are dropped and counted.
class StreamingAggregator {
public:
    explicit StreamingAggregator(IngestConfig config);

    void add(const TimedFlow& flow);
    /// Samples for every interval that is now closed, in time order.
    std::vector<LinkSample> drain();
    /// Samples for every remaining interval.
    std::vector<LinkSample> finish();

    std::size_t late_records() const noexcept { return late_records_; }

private:
    std::vector<LinkSample> emit_through(std::int64_t last_index);

    IngestConfig config_;
    std::map<std::int64_t, IntervalTotals> open_;
    std::optional<std::int64_t> next_emit_;
    double watermark_;
    std::size_t late_records_ = 0;
};

} // namespace flowcap
