#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flowcap/distribution.hpp"
#include "flowcap/link_sample.hpp"
#include "flowcap/traffic_model.hpp"

namespace flowcap {

enum class SimulationMode {
    /// M/G/infinity: every flow keeps its sampled duration; the link never
    /// constrains anything.
    Unconstrained,
    /// Egalitarian processor sharing on a link of capacity C: each of the N
    /// active flows is served at min(peak_rate, C / N).
    ProcessorSharing,
};

struct SimulationConfig {
    TrafficModel model;
    double horizon = 1000.0; ///< seconds
    std::uint64_t seed = 1;
    SimulationMode mode = SimulationMode::Unconstrained;
    std::optional<double> link_capacity;      ///< bits/s; required for ProcessorSharing
    std::optional<double> per_flow_peak_rate; ///< bits/s; ProcessorSharing only
    double sample_interval = 1.0;             ///< seconds
    /// Statistics ignore samples before this time. Defaults to 10 E[D]
    /// (10 E[S] / peak_rate under processor sharing).
    std::optional<double> warmup;
    std::size_t batches = 30;
    /// Unconstrained runs without a capacity report utilization as a percentage
    /// of headroom * lambda * E[S].
    double notional_headroom = 2.0;

    /// Throws ConfigError naming the offending `sim.*` key.
    void validate() const;
    double effective_warmup() const;
    /// Rate corresponding to 100% utilization in the reported samples.
    double utilization_reference() const;
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// Point estimate plus a 95% batch-means interval. The interval is absent
/// when there are too few samples to form two batches.
struct Estimate {
    double value = 0.0;
    std::optional<ConfidenceInterval> ci;
};

struct CompletedFlow {
    /// Sampled size, realized duration (completion - arrival).
    FlowRecord record;
    /// Bits the link delivered to this flow.
    double served_bits = 0.0;
};

struct SimulationResult {
    std::vector<LinkSample> samples;
    /// Aggregate rate R(t) at each sample instant, parallel to `samples`.
    std::vector<double> rates;
    std::vector<CompletedFlow> completed_flows;
    std::size_t arrivals = 0;

    Estimate mean_rate;
    Estimate rate_variance;
    Estimate mean_active;
    double mean_utilization = 0.0;
    /// Largest aggregate rate held over any inter-event interval.
    double peak_aggregate_rate = 0.0;
    std::size_t stationary_samples = 0;

    double empirical_mean_rate() const noexcept { return mean_rate.value; }
    double empirical_rate_variance() const noexcept { return rate_variance.value; }
    double empirical_mean_active() const noexcept { return mean_active.value; }
};

/// Homogeneous Poisson arrivals on [0, horizon): exponential gaps of rate
/// lambda accumulated from 0.
std::vector<double> generate_arrivals(double lambda, double horizon, RandomStream& rng);

/// Arrivals plus sampled sizes and durations for `config.model`. Uses
/// independent sub-streams of `config.seed` for arrivals, sizes and durations,
/// so changing lambda alone keeps the size sequence fixed.
std::vector<FlowRecord> generate_flows(const SimulationConfig& config);

SimulationResult simulate(const SimulationConfig& config);

SimulationResult simulate_unconstrained(const SimulationConfig& config);
/// Runs the unconstrained model over an explicit flow set.
SimulationResult simulate_unconstrained(const SimulationConfig& config, std::span<const FlowRecord> flows);

SimulationResult simulate_processor_sharing(const SimulationConfig& config);
/// Runs processor sharing over an explicit flow set; only arrival_time and
/// size are used, durations are an output.
SimulationResult simulate_processor_sharing(const SimulationConfig& config,
                                            std::span<const FlowRecord> flows);

struct SweepPoint {
    double lambda = 0.0;
    double mean_utilization = 0.0;
    double mean_active_flows = 0.0;
};

/// One processor-sharing run per arrival rate, all with `base.seed`. Runs may
/// execute concurrently; output is ordered by lambda.
std::vector<SweepPoint> load_sweep(const SimulationConfig& base, std::span<const double> lambda_values);

} // namespace flowcap
