#include "flowcap/flow_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "flowcap/errors.hpp"
#include "flowcap/kv_config.hpp"

namespace flowcap {

namespace {

constexpr std::uint64_t kArrivalStream = 0;
constexpr std::uint64_t kSizeStream = 1;
constexpr std::uint64_t kDurationStream = 2;

double student_t_975(std::size_t dof) {
    boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, 0.975);
}

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x)
        ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// Batch values of a per-sample quantity over non-overlapping contiguous
// batches. Trailing samples that do not fill a batch are ignored.
template <typename F>
std::vector<double> batch_values(std::span<const double> x, std::size_t batches, F per_sample) {
    const std::size_t length = x.size() / batches;
    std::vector<double> out(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (std::size_t i = b * length; i < (b + 1) * length; ++i)
            acc += per_sample(x[i]);
        out[b] = acc / static_cast<double>(length);
    }
    return out;
}

std::optional<ConfidenceInterval> interval_around(double centre, std::span<const double> batch) {
    const double half = student_t_975(batch.size() - 1) * sample_sd(batch) /
                        std::sqrt(static_cast<double>(batch.size()));
    return ConfidenceInterval{centre - half, centre + half};
}

Estimate estimate_mean(std::span<const double> x, std::size_t batches) {
    Estimate e;
    e.value = mean_of(x);
    batches = std::min(batches, x.size());
    if (batches >= 2)
        e.ci = interval_around(e.value, batch_values(x, batches, [](double v) { return v; }));
    return e;
}

Estimate estimate_variance(std::span<const double> x, std::size_t batches) {
    Estimate e;
    const double m = mean_of(x);
    if (x.size() < 2)
        return e;
    double ss = 0.0;
    for (double v : x)
        ss += (v - m) * (v - m);
    e.value = ss / static_cast<double>(x.size() - 1);
    batches = std::min(batches, x.size());
    if (batches >= 2) {
        e.ci = interval_around(e.value,
                               batch_values(x, batches, [m](double v) { return (v - m) * (v - m); }));
    }
    return e;
}

void fill_statistics(const SimulationConfig& config, SimulationResult& result) {
    const double warmup = config.effective_warmup();
    const auto first = std::find_if(result.samples.begin(), result.samples.end(),
                                    [warmup](const LinkSample& s) { return s.timestamp >= warmup; });
    const auto offset = static_cast<std::size_t>(first - result.samples.begin());
    const std::size_t n = result.samples.size() - offset;
    if (n == 0)
        throw ConfigError("sim.sample_interval", "no samples fall after the warmup period");

    std::vector<double> active(n);
    std::vector<double> utilization(n);
    for (std::size_t i = 0; i < n; ++i) {
        active[i] = static_cast<double>(result.samples[offset + i].active_flows);
        utilization[i] = result.samples[offset + i].utilization;
    }
    const std::span<const double> rates(result.rates.data() + offset, n);

    result.stationary_samples = n;
    result.mean_rate = estimate_mean(rates, config.batches);
    result.rate_variance = estimate_variance(rates, config.batches);
    result.mean_active = estimate_mean(active, config.batches);
    result.mean_utilization = mean_of(utilization);
}

std::size_t sample_count(const SimulationConfig& config) {
    return static_cast<std::size_t>(std::ceil(config.horizon / config.sample_interval));
}

double utilization_percent(double rate, double reference) {
    return reference > 0.0 ? 100.0 * rate / reference : 0.0;
}

std::vector<FlowRecord> sorted_by_arrival(std::span<const FlowRecord> flows) {
    std::vector<FlowRecord> out(flows.begin(), flows.end());
    std::stable_sort(out.begin(), out.end(), [](const FlowRecord& a, const FlowRecord& b) {
        return a.arrival_time < b.arrival_time;
    });
    return out;
}

} // namespace

void SimulationConfig::validate() const {
    try {
        model.validate();
    } catch (const InvalidParameters& e) {
        throw ConfigError("model.lambda", e.what());
    }
    if (!(std::isfinite(horizon) && horizon > 0.0))
        throw ConfigError("sim.horizon", "must be > 0");
    if (!(std::isfinite(sample_interval) && sample_interval > 0.0))
        throw ConfigError("sim.sample_interval", "must be > 0");
    if (batches < 2)
        throw ConfigError("sim.batches", "at least 2 batches are needed for an interval estimate");
    if (!(std::isfinite(notional_headroom) && notional_headroom > 0.0))
        throw ConfigError("sim.notional_headroom", "must be > 0");
    if (link_capacity && !(std::isfinite(*link_capacity) && *link_capacity > 0.0))
        throw ConfigError("sim.capacity", "must be > 0");
    if (mode == SimulationMode::ProcessorSharing) {
        if (!link_capacity)
            throw ConfigError("sim.capacity", "required in processor_sharing mode");
        if (!per_flow_peak_rate)
            throw ConfigError("sim.peak_rate", "required in processor_sharing mode");
        if (!(*per_flow_peak_rate > 0.0 && *per_flow_peak_rate <= *link_capacity))
            throw ConfigError("sim.peak_rate", "must satisfy 0 < peak_rate <= capacity");
    }
    if (warmup && !(std::isfinite(*warmup) && *warmup >= 0.0))
        throw ConfigError("sim.warmup", "must be >= 0");
    const double w = effective_warmup();
    if (!(horizon > w))
        throw ConfigError("sim.warmup", "warmup " + format_double(w) + " s must be shorter than the horizon");
}

double SimulationConfig::effective_warmup() const {
    if (warmup)
        return *warmup;
    try {
        if (mode == SimulationMode::ProcessorSharing && per_flow_peak_rate)
            return 10.0 * model.size_dist.mean() / *per_flow_peak_rate;
        return 10.0 * model.duration_dist.mean();
    } catch (const UndefinedMoment&) {
        throw ConfigError("sim.warmup", "cannot default to 10 mean durations when the mean is undefined; "
                                        "set it explicitly");
    }
}

double SimulationConfig::utilization_reference() const {
    if (link_capacity)
        return *link_capacity;
    return notional_headroom * mean_rate(model);
}

std::vector<double> generate_arrivals(double lambda, double horizon, RandomStream& rng) {
    std::vector<double> out;
    if (!(lambda > 0.0))
        return out;
    out.reserve(static_cast<std::size_t>(lambda * horizon * 1.05) + 16);
    double t = 0.0;
    while (true) {
        t += -std::log(rng.uniform_open()) / lambda;
        if (t >= horizon)
            break;
        out.push_back(t);
    }
    return out;
}

std::vector<FlowRecord> generate_flows(const SimulationConfig& config) {
    RandomStream arrival_rng(config.seed, kArrivalStream);
    RandomStream size_rng(config.seed, kSizeStream);
    RandomStream duration_rng(config.seed, kDurationStream);
    const auto arrivals = generate_arrivals(config.model.lambda, config.horizon, arrival_rng);
    std::vector<FlowRecord> flows;
    flows.reserve(arrivals.size());
    for (double t : arrivals) {
        const double size = config.model.size_dist.sample(size_rng);
        const double duration = config.model.duration_dist.sample(duration_rng);
        flows.push_back(FlowRecord{t, size, duration, config.model.profile});
    }
    return flows;
}

SimulationResult simulate(const SimulationConfig& config) {
    return config.mode == SimulationMode::ProcessorSharing ? simulate_processor_sharing(config)
                                                           : simulate_unconstrained(config);
}

SimulationResult simulate_unconstrained(const SimulationConfig& config) {
    config.validate();
    const auto flows = generate_flows(config);
    return simulate_unconstrained(config, flows);
}

SimulationResult simulate_unconstrained(const SimulationConfig& config, std::span<const FlowRecord> input) {
    config.validate();
    const auto flows = sorted_by_arrival(input);
    const double reference = config.utilization_reference();

    SimulationResult result;
    result.arrivals = flows.size();

    struct Departure {
        double end;
        double rate;
        bool operator>(const Departure& o) const { return end > o.end; }
    };
    std::priority_queue<Departure, std::vector<Departure>, std::greater<>> active;
    long double rate_sum = 0.0L;

    const std::size_t count = sample_count(config);
    result.samples.reserve(count);
    result.rates.reserve(count);
    std::size_t next = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) * config.sample_interval;
        for (; next < flows.size() && flows[next].arrival_time <= t; ++next) {
            const double rate = flows[next].size / flows[next].duration;
            active.push({flows[next].end_time(), rate});
            rate_sum += rate;
        }
        // A flow is active through the closed interval [T, T + D].
        while (!active.empty() && active.top().end < t) {
            rate_sum -= active.top().rate;
            active.pop();
        }
        if (active.empty())
            rate_sum = 0.0L;
        const double rate = static_cast<double>(rate_sum);
        result.peak_aggregate_rate = std::max(result.peak_aggregate_rate, rate);
        result.rates.push_back(rate);
        result.samples.push_back({t, utilization_percent(rate, reference), active.size()});
    }

    for (const auto& f : flows) {
        if (f.end_time() <= config.horizon)
            result.completed_flows.push_back({f, (f.size / f.duration) * f.duration});
    }
    fill_statistics(config, result);
    return result;
}

SimulationResult simulate_processor_sharing(const SimulationConfig& config) {
    config.validate();
    const auto flows = generate_flows(config);
    return simulate_processor_sharing(config, flows);
}

SimulationResult simulate_processor_sharing(const SimulationConfig& config,
                                            std::span<const FlowRecord> input) {
    config.validate();
    const auto flows = sorted_by_arrival(input);
    const double capacity = *config.link_capacity;
    const double peak = *config.per_flow_peak_rate;

    SimulationResult result;
    result.arrivals = flows.size();

    // All active flows are served at the same rate, so progress is tracked on
    // a single "virtual service" clock: bits delivered to any one continuously
    // active flow. A flow arriving when the clock reads v finishes when it
    // reaches v + size.
    struct Tag {
        double finish;
        std::size_t index;
        bool operator>(const Tag& o) const {
            return finish > o.finish || (finish == o.finish && index > o.index);
        }
    };
    std::priority_queue<Tag, std::vector<Tag>, std::greater<>> active;
    std::vector<double> start_tag(flows.size(), 0.0);

    double now = 0.0;
    double virtual_clock = 0.0;
    auto aggregate_rate = [&] {
        const auto n = static_cast<double>(active.size());
        return n * peak <= capacity ? n * peak : capacity;
    };
    auto per_flow_rate = [&] { return active.empty() ? 0.0 : std::min(peak, capacity / active.size()); };

    auto complete_head = [&] {
        const Tag head = active.top();
        active.pop();
        const auto& f = flows[head.index];
        const double served = head.finish - start_tag[head.index];
        result.completed_flows.push_back(
            {FlowRecord{f.arrival_time, f.size, now - f.arrival_time, f.profile}, served});
    };

    const std::size_t count = sample_count(config);
    result.samples.reserve(count);
    result.rates.reserve(count);
    std::size_t next_arrival = 0;
    std::size_t next_sample = 0;
    constexpr double inf = std::numeric_limits<double>::infinity();

    while (next_sample < count) {
        const double sample_time = static_cast<double>(next_sample) * config.sample_interval;
        const double arrival_time = next_arrival < flows.size() ? flows[next_arrival].arrival_time : inf;
        const double rate = per_flow_rate();
        const double completion_time =
            active.empty() ? inf : now + std::max(0.0, active.top().finish - virtual_clock) / rate;

        const double t = std::min({sample_time, arrival_time, completion_time});
        virtual_clock += rate * (t - now);
        now = t;

        if (completion_time <= t) {
            // Snap to the exact finishing tag, then release every flow that
            // finishes at the same instant.
            virtual_clock = std::max(virtual_clock, active.top().finish);
            complete_head();
            const double tolerance = 1e-12 * std::max(1.0, std::abs(virtual_clock));
            while (!active.empty() && active.top().finish <= virtual_clock + tolerance)
                complete_head();
        } else if (arrival_time <= t) {
            start_tag[next_arrival] = virtual_clock;
            active.push({virtual_clock + flows[next_arrival].size, next_arrival});
            ++next_arrival;
        } else {
            const double agg = aggregate_rate();
            result.rates.push_back(agg);
            result.samples.push_back({t, 100.0 * agg / capacity, active.size()});
            ++next_sample;
        }
        result.peak_aggregate_rate = std::max(result.peak_aggregate_rate, aggregate_rate());
    }

    fill_statistics(config, result);
    return result;
}

std::vector<SweepPoint> load_sweep(const SimulationConfig& base, std::span<const double> lambda_values) {
    if (base.mode != SimulationMode::ProcessorSharing)
        throw ConfigError("sim.mode", "load sweeps require processor_sharing mode");
    std::vector<double> lambdas(lambda_values.begin(), lambda_values.end());
    std::sort(lambdas.begin(), lambdas.end());
    for (double l : lambdas) {
        if (!(std::isfinite(l) && l >= 0.0))
            throw ConfigError("model.lambda", "sweep arrival rates must be finite and >= 0");
    }
    base.validate();

    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(lambdas.size());
    for (double l : lambdas) {
        jobs.push_back(std::async(std::launch::async, [&base, l] {
            SimulationConfig config = base;
            config.model.lambda = l;
            const auto result = simulate_processor_sharing(config);
            return SweepPoint{l, result.mean_utilization, result.empirical_mean_active()};
        }));
    }
    std::vector<SweepPoint> points;
    points.reserve(jobs.size());
    for (auto& job : jobs)
        points.push_back(job.get());
    return points;
}

} // namespace flowcap
