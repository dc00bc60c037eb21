#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowcap/link_sample.hpp"

namespace flowcap {

enum class WorkingEstimator {
    /// Mean of U / N_a over qualifying samples; the procedure's own estimator.
    RatioMean,
    /// Least squares through the origin, sum(N U) / sum(N^2). Comparison only.
    LeastSquares,
};

struct AnalyzerConfig {
    double working_util_threshold = 40.0; ///< percent; samples at or below feed the working line
    double saturation_quantile = 0.8;     ///< N_a percentile a saturation sample must exceed
    double working_ratio_floor = 0.9;
    double moderate_ratio_floor = 0.6;
    std::size_t min_working_samples = 5;
    std::size_t min_saturation_samples = 3;
    WorkingEstimator working_estimator = WorkingEstimator::RatioMean;

    /// Throws ConfigError naming the `analyzer.*` key.
    void validate() const;
};

/// U = intercept + slope * N, with U in percent and N in flows.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    std::size_t sample_count = 0;
    double rms_residual = 0.0;

    double at(double flows) const noexcept { return intercept + slope * flows; }
};

/// Crossing of the working and saturation lines. `utilization` is the length
/// of the working area.
struct Knee {
    double flows = 0.0;
    double utilization = 0.0;
};

enum class NetworkState { Working, Moderate, Overloaded };

std::string_view to_string(NetworkState state) noexcept;

struct StateCounts {
    std::size_t working = 0;
    std::size_t moderate = 0;
    std::size_t overloaded = 0;

    friend bool operator==(const StateCounts&, const StateCounts&) = default;
};

inline constexpr std::string_view kFlagWorkingAreaNotExceeded = "working_area_not_exceeded";
inline constexpr std::string_view kFlagKneeAboveFullLoad = "knee_above_full_utilization";
inline constexpr std::string_view kFlagLeastSquaresWorkingLine = "least_squares_working_line";

struct WorkingAreaReport {
    LineFit working_line;
    std::optional<LineFit> saturation_line;
    std::optional<Knee> knee;
    /// One label per input sample, in input order.
    std::vector<NetworkState> state_labels;
    StateCounts state_counts;
    std::vector<std::string> flags;

    bool working_area_exceeded() const noexcept { return knee.has_value(); }
};

/// U / (slope * N_a); 1 when N_a is zero.
double working_ratio(const LinkSample& sample, const LineFit& working) noexcept;

/// Line through the origin fitted to samples with U <= working_util_threshold
/// and N_a > 0. Throws FitError (InsufficientWorkingData, DegenerateData).
LineFit fit_working_line(std::span<const LinkSample> samples, const AnalyzerConfig& config);

/// Ordinary least squares over samples whose N_a exceeds the
/// saturation_quantile of all observed N_a and which sit below
/// working_ratio_floor of the working line. Throws FitError
/// (NoSaturationObserved, InsufficientSaturationData).
LineFit fit_saturation_line(std::span<const LinkSample> samples, const LineFit& working,
                            const AnalyzerConfig& config);

/// Throws FitError (ParallelLines, NegativeIntersection).
Knee find_knee(const LineFit& working, const LineFit& saturation);

/// Without a knee, samples are labelled by their working ratio alone.
NetworkState classify(const LinkSample& sample, const LineFit& working, const std::optional<Knee>& knee,
                      const AnalyzerConfig& config) noexcept;

/// Full procedure: working line, saturation line, knee, labels. When no sample
/// departs from the working line the report has no knee and carries
/// kFlagWorkingAreaNotExceeded. Other fit failures propagate.
WorkingAreaReport analyze(std::span<const LinkSample> samples, const AnalyzerConfig& config);

/// Type-7 (linear interpolation) sample quantile of `values`, q in [0, 1].
double quantile(std::vector<double> values, double q);

} // namespace flowcap
