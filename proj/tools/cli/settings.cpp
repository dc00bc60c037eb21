#include "cli/settings.hpp"

#include <algorithm>
#include <array>

#include "flowcap/errors.hpp"

namespace flowcap::cli {

namespace {

constexpr std::array<std::string_view, 23> kKeys = {
    "model.lambda",
    "model.size.family",
    "model.size.params",
    "model.duration.family",
    "model.duration.params",
    "model.profile",
    "sim.mode",
    "sim.horizon",
    "sim.seed",
    "sim.capacity",
    "sim.peak_rate",
    "sim.sample_interval",
    "sim.warmup",
    "sim.batches",
    "sim.notional_headroom",
    "analyzer.working_util_threshold",
    "analyzer.saturation_quantile",
    "analyzer.working_ratio_floor",
    "analyzer.moderate_ratio_floor",
    "analyzer.min_working_samples",
    "analyzer.min_saturation_samples",
    "analyzer.working_estimator",
    "report.moments",
};

} // namespace

std::span<const std::string_view> documented_keys() { return kKeys; }

void require_documented_keys(const KeyValueConfig& config) {
    for (const auto& key : config.keys()) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw ConfigError(key, "unknown setting");
    }
}

SimulationConfig simulation_config_from(const KeyValueConfig& config) {
    SimulationConfig sim;
    sim.model = traffic_model_from_config(config, "model.");
    if (const auto mode = config.get("sim.mode")) {
        if (*mode == "unconstrained")
            sim.mode = SimulationMode::Unconstrained;
        else if (*mode == "processor_sharing")
            sim.mode = SimulationMode::ProcessorSharing;
        else
            throw ConfigError("sim.mode", "expected unconstrained or processor_sharing, got '" + *mode + "'");
    }
    sim.horizon = config.get_double("sim.horizon", sim.horizon);
    sim.seed = config.get_uint("sim.seed", sim.seed);
    sim.link_capacity = config.get_double("sim.capacity");
    sim.per_flow_peak_rate = config.get_double("sim.peak_rate");
    sim.sample_interval = config.get_double("sim.sample_interval", sim.sample_interval);
    sim.warmup = config.get_double("sim.warmup");
    sim.batches = config.get_uint("sim.batches", sim.batches);
    sim.notional_headroom = config.get_double("sim.notional_headroom", sim.notional_headroom);
    sim.validate();
    return sim;
}

void simulation_config_to(const SimulationConfig& sim, KeyValueConfig& config) {
    traffic_model_to_config(sim.model, config, "model.");
    config.set("sim.mode", sim.mode == SimulationMode::ProcessorSharing ? "processor_sharing" : "unconstrained");
    config.set("sim.horizon", format_double(sim.horizon));
    config.set("sim.seed", std::to_string(sim.seed));
    if (sim.link_capacity)
        config.set("sim.capacity", format_double(*sim.link_capacity));
    if (sim.per_flow_peak_rate)
        config.set("sim.peak_rate", format_double(*sim.per_flow_peak_rate));
    config.set("sim.sample_interval", format_double(sim.sample_interval));
    config.set("sim.warmup", format_double(sim.effective_warmup()));
    config.set("sim.batches", std::to_string(sim.batches));
    config.set("sim.notional_headroom", format_double(sim.notional_headroom));
}

AnalyzerConfig analyzer_config_from(const KeyValueConfig& config) {
    AnalyzerConfig a;
    a.working_util_threshold = config.get_double("analyzer.working_util_threshold", a.working_util_threshold);
    a.saturation_quantile = config.get_double("analyzer.saturation_quantile", a.saturation_quantile);
    a.working_ratio_floor = config.get_double("analyzer.working_ratio_floor", a.working_ratio_floor);
    a.moderate_ratio_floor = config.get_double("analyzer.moderate_ratio_floor", a.moderate_ratio_floor);
    a.min_working_samples = config.get_uint("analyzer.min_working_samples", a.min_working_samples);
    a.min_saturation_samples = config.get_uint("analyzer.min_saturation_samples", a.min_saturation_samples);
    if (const auto estimator = config.get("analyzer.working_estimator")) {
        if (*estimator == "ratio_mean")
            a.working_estimator = WorkingEstimator::RatioMean;
        else if (*estimator == "least_squares")
            a.working_estimator = WorkingEstimator::LeastSquares;
        else
            throw ConfigError("analyzer.working_estimator",
                              "expected ratio_mean or least_squares, got '" + *estimator + "'");
    }
    a.validate();
    return a;
}

} // namespace flowcap::cli
