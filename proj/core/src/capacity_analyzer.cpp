#include "flowcap/capacity_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowcap/errors.hpp"
#include "flowcap/kv_config.hpp"

namespace flowcap {

namespace {

// Summation order is fixed by sorting, so results do not depend on the order
// samples were supplied in.
std::vector<LinkSample> canonical_order(std::vector<LinkSample> samples) {
    std::sort(samples.begin(), samples.end(), [](const LinkSample& a, const LinkSample& b) {
        if (a.active_flows != b.active_flows)
            return a.active_flows < b.active_flows;
        if (a.utilization != b.utilization)
            return a.utilization < b.utilization;
        return a.timestamp < b.timestamp;
    });
    return samples;
}

double rms_residual(std::span<const LinkSample> samples, const LineFit& line) {
    if (samples.empty())
        return 0.0;
    double ss = 0.0;
    for (const auto& s : samples) {
        const double r = s.utilization - line.at(static_cast<double>(s.active_flows));
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(samples.size()));
}

} // namespace

std::string_view to_string(NetworkState state) noexcept {
    switch (state) {
    case NetworkState::Working: return "working";
    case NetworkState::Moderate: return "moderate";
    case NetworkState::Overloaded: return "overloaded";
    }
    return "unknown";
}

void AnalyzerConfig::validate() const {
    if (!(std::isfinite(working_util_threshold) && working_util_threshold > 0.0 &&
          working_util_threshold <= 100.0))
        throw ConfigError("analyzer.working_util_threshold", "must be in (0, 100]");
    if (!(saturation_quantile > 0.0 && saturation_quantile < 1.0))
        throw ConfigError("analyzer.saturation_quantile", "must be in (0, 1)");
    if (!(working_ratio_floor > 0.0 && working_ratio_floor <= 1.0))
        throw ConfigError("analyzer.working_ratio_floor", "must be in (0, 1]");
    if (!(moderate_ratio_floor > 0.0 && moderate_ratio_floor < working_ratio_floor))
        throw ConfigError("analyzer.moderate_ratio_floor", "must satisfy 0 < moderate < working_ratio_floor");
    if (min_working_samples < 1)
        throw ConfigError("analyzer.min_working_samples", "must be >= 1");
    if (min_saturation_samples < 2)
        throw ConfigError("analyzer.min_saturation_samples", "a line needs at least 2 samples");
}

double quantile(std::vector<double> values, double q) {
    if (values.empty())
        return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double working_ratio(const LinkSample& sample, const LineFit& working) noexcept {
    if (sample.active_flows == 0)
        return 1.0;
    return sample.utilization / (working.slope * static_cast<double>(sample.active_flows));
}

LineFit fit_working_line(std::span<const LinkSample> samples, const AnalyzerConfig& config) {
    config.validate();
    std::vector<LinkSample> below;
    for (const auto& s : samples) {
        if (s.utilization <= config.working_util_threshold)
            below.push_back(s);
    }
    const auto threshold = format_double(config.working_util_threshold);
    if (below.size() < config.min_working_samples) {
        throw FitError(FitErrorKind::InsufficientWorkingData,
                       std::to_string(below.size()) + " sample(s) at or below " + threshold +
                           "% utilization, need " + std::to_string(config.min_working_samples));
    }
    std::vector<LinkSample> qualifying;
    for (const auto& s : below) {
        if (s.active_flows > 0)
            qualifying.push_back(s);
    }
    if (qualifying.empty())
        throw FitError(FitErrorKind::DegenerateData, "every sample below " + threshold + "% has zero active flows");
    if (qualifying.size() < config.min_working_samples) {
        throw FitError(FitErrorKind::InsufficientWorkingData,
                       std::to_string(qualifying.size()) + " sample(s) with active flows at or below " +
                           threshold + "% utilization, need " + std::to_string(config.min_working_samples));
    }
    qualifying = canonical_order(std::move(qualifying));

    LineFit fit;
    fit.sample_count = qualifying.size();
    if (config.working_estimator == WorkingEstimator::RatioMean) {
        // Running mean: exact when every ratio is the same.
        double mean = 0.0;
        double k = 0.0;
        for (const auto& s : qualifying) {
            k += 1.0;
            mean += (s.utilization / static_cast<double>(s.active_flows) - mean) / k;
        }
        fit.slope = mean;
    } else {
        double nu = 0.0;
        double nn = 0.0;
        for (const auto& s : qualifying) {
            const auto n = static_cast<double>(s.active_flows);
            nu += n * s.utilization;
            nn += n * n;
        }
        fit.slope = nu / nn;
    }
    if (!(fit.slope > 0.0))
        throw FitError(FitErrorKind::DegenerateData, "working-area utilization is zero; slope is not positive");
    fit.rms_residual = rms_residual(qualifying, fit);
    return fit;
}

LineFit fit_saturation_line(std::span<const LinkSample> samples, const LineFit& working,
                            const AnalyzerConfig& config) {
    config.validate();
    std::vector<double> flows;
    flows.reserve(samples.size());
    for (const auto& s : samples)
        flows.push_back(static_cast<double>(s.active_flows));
    const double cutoff = quantile(std::move(flows), config.saturation_quantile);

    std::vector<LinkSample> qualifying;
    for (const auto& s : samples) {
        if (static_cast<double>(s.active_flows) > cutoff && working_ratio(s, working) < config.working_ratio_floor)
            qualifying.push_back(s);
    }
    if (qualifying.empty()) {
        throw FitError(FitErrorKind::NoSaturationObserved,
                       "no sample above " + format_double(cutoff) + " flows departs from the working line");
    }
    if (qualifying.size() < config.min_saturation_samples) {
        throw FitError(FitErrorKind::InsufficientSaturationData,
                       std::to_string(qualifying.size()) + " saturated sample(s), need " +
                           std::to_string(config.min_saturation_samples));
    }
    qualifying = canonical_order(std::move(qualifying));

    const auto n = static_cast<double>(qualifying.size());
    double mean_n = 0.0;
    double mean_u = 0.0;
    for (const auto& s : qualifying) {
        mean_n += static_cast<double>(s.active_flows);
        mean_u += s.utilization;
    }
    mean_n /= n;
    mean_u /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& s : qualifying) {
        const double dx = static_cast<double>(s.active_flows) - mean_n;
        sxx += dx * dx;
        sxy += dx * (s.utilization - mean_u);
    }

    LineFit fit;
    fit.sample_count = qualifying.size();
    // Identical N_a everywhere: the best line is the horizontal one.
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = mean_u - fit.slope * mean_n;
    if (!(fit.slope < working.slope)) {
        throw FitError(FitErrorKind::InsufficientSaturationData,
                       "fitted saturation slope " + format_double(fit.slope) +
                           " is not below the working slope " + format_double(working.slope));
    }
    fit.rms_residual = rms_residual(qualifying, fit);
    return fit;
}

Knee find_knee(const LineFit& working, const LineFit& saturation) {
    const double gap = working.slope - saturation.slope;
    const double scale = std::max(std::abs(working.slope), std::abs(saturation.slope));
    if (std::abs(gap) <= 1e-12 * scale || gap == 0.0) {
        throw FitError(FitErrorKind::ParallelLines, "slopes " + format_double(working.slope) + " and " +
                                                        format_double(saturation.slope) + " do not cross");
    }
    const double flows = (saturation.intercept - working.intercept) / gap;
    if (!(flows > 0.0)) {
        throw FitError(FitErrorKind::NegativeIntersection,
                       "lines cross at " + format_double(flows) + " flows");
    }
    return {flows, working.at(flows)};
}

NetworkState classify(const LinkSample& sample, const LineFit& working, const std::optional<Knee>& knee,
                      const AnalyzerConfig& config) noexcept {
    const double ratio = working_ratio(sample, working);
    const bool beyond_knee = knee && static_cast<double>(sample.active_flows) > knee->flows;
    if (beyond_knee || ratio < config.moderate_ratio_floor)
        return NetworkState::Overloaded;
    if (ratio >= config.working_ratio_floor)
        return NetworkState::Working;
    return NetworkState::Moderate;
}

WorkingAreaReport analyze(std::span<const LinkSample> samples, const AnalyzerConfig& config) {
    config.validate();
    if (samples.empty())
        throw FitError(FitErrorKind::EmptyInput, "no samples to analyze");

    WorkingAreaReport report;
    report.working_line = fit_working_line(samples, config);
    if (config.working_estimator == WorkingEstimator::LeastSquares)
        report.flags.emplace_back(kFlagLeastSquaresWorkingLine);

    try {
        report.saturation_line = fit_saturation_line(samples, report.working_line, config);
    } catch (const FitError& e) {
        if (e.kind() != FitErrorKind::NoSaturationObserved)
            throw;
        report.flags.emplace_back(kFlagWorkingAreaNotExceeded);
    }
    if (report.saturation_line) {
        report.knee = find_knee(report.working_line, *report.saturation_line);
        if (report.knee->utilization > 100.0)
            report.flags.emplace_back(kFlagKneeAboveFullLoad);
    }

    report.state_labels.reserve(samples.size());
    for (const auto& s : samples) {
        const auto state = classify(s, report.working_line, report.knee, config);
        report.state_labels.push_back(state);
        switch (state) {
        case NetworkState::Working: ++report.state_counts.working; break;
        case NetworkState::Moderate: ++report.state_counts.moderate; break;
        case NetworkState::Overloaded: ++report.state_counts.overloaded; break;
        }
    }
    return report;
}

} // namespace flowcap
