#pragma once

#include <span>
#include <string_view>

#include "flowcap/capacity_analyzer.hpp"
#include "flowcap/flow_simulator.hpp"
#include "flowcap/kv_config.hpp"

namespace flowcap::cli {

// Dotted keys accepted in config files and --set overrides.
//
//   model.lambda  model.size.family  model.size.params
//   model.duration.family  model.duration.params  model.profile
//   sim.mode (unconstrained | processor_sharing)  sim.horizon  sim.seed
//   sim.capacity  sim.peak_rate  sim.sample_interval  sim.warmup
//   sim.batches  sim.notional_headroom
//   analyzer.working_util_threshold  analyzer.saturation_quantile
//   analyzer.working_ratio_floor  analyzer.moderate_ratio_floor
//   analyzer.min_working_samples  analyzer.min_saturation_samples
//   analyzer.working_estimator (ratio_mean | least_squares)
//   report.moments (comma list of mean_rate, rate_variance, mean_active_flows)

std::span<const std::string_view> documented_keys();

/// Throws ConfigError for the first key that is not documented.
void require_documented_keys(const KeyValueConfig& config);

SimulationConfig simulation_config_from(const KeyValueConfig& config);
void simulation_config_to(const SimulationConfig& sim, KeyValueConfig& config);

AnalyzerConfig analyzer_config_from(const KeyValueConfig& config);

} // namespace flowcap::cli
