#pragma once

#include "flowcap/distribution.hpp"

namespace flowcap {

/// Shape of a flow's instantaneous rate over its lifetime. Only the constant
/// shape is implemented: rate = size / duration on [arrival, arrival + duration].
enum class RateProfile { ConstantRate };

/// One flow: arrival time (s), size (bits), duration (s) and rate shape.
struct FlowRecord {
    double arrival_time = 0.0;
    double size = 0.0;
    double duration = 0.0;
    RateProfile profile = RateProfile::ConstantRate;

    /// Throws InvalidParameters unless size > 0, duration > 0, arrival_time >= 0.
    static FlowRecord make(double arrival_time, double size, double duration,
                           RateProfile profile = RateProfile::ConstantRate);

    double end_time() const noexcept { return arrival_time + duration; }

    /// Active on the closed interval [arrival_time, end_time()].
    bool active_at(double t) const noexcept { return arrival_time <= t && t <= end_time(); }

    double rate_at(double t) const noexcept { return active_at(t) ? size / duration : 0.0; }

    /// Bits sent during [from, to]; integrating over the whole lifetime gives `size`.
    double bits_between(double from, double to) const noexcept;

    friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

enum class SizeDurationCoupling { Independent };

struct TrafficModel {
    double lambda = 0.0; ///< flow arrival rate, flows/s
    DistributionSpec size_dist = DistributionSpec::deterministic(1.0);     ///< bits
    DistributionSpec duration_dist = DistributionSpec::deterministic(1.0); ///< seconds
    SizeDurationCoupling coupling = SizeDurationCoupling::Independent;
    RateProfile profile = RateProfile::ConstantRate;

    /// Throws InvalidParameters if lambda is negative or not finite.
    void validate() const;

    friend bool operator==(const TrafficModel&, const TrafficModel&) = default;
};

struct TheoreticalMoments {
    double mean_rate = 0.0;         ///< E[R(t)], bits/s
    double rate_variance = 0.0;     ///< V_R, (bits/s)^2
    double mean_active_flows = 0.0; ///< N
};

/// lambda * E[S]. Zero when lambda is zero, regardless of the distributions.
double mean_rate(const TrafficModel& model);

/// lambda * E[S^2 / D] = lambda * E[S^2] * E[1/D] for independent S and D
/// under constant-rate shots. Throws UndefinedMoment when either factor
/// diverges, e.g. exponential durations (E[1/D] is infinite).
double rate_variance(const TrafficModel& model);

/// Little's law: lambda * E[D].
double mean_active_flows(const TrafficModel& model);

/// All three of the above; throws if any is undefined.
TheoreticalMoments theoretical_moments(const TrafficModel& model);

} // namespace flowcap
