#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace flowcap {

/// Caller-owned random state. Every stochastic routine takes one of these
/// explicitly; there is no global generator.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    /// Uniform draw on the open interval (0, 1).
    double uniform_open();

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

enum class DistributionFamily { Deterministic, Exponential, LogNormal, ParetoTypeI };

std::string_view family_name(DistributionFamily family) noexcept;

/// Parametric law for flow sizes or durations. All families have support on
/// the strictly positive reals.
///
/// Parameters by family:
///   Deterministic  value
///   Exponential    mean
///   LogNormal      mu, sigma        (of the underlying normal)
///   ParetoTypeI    shape, scale     (alpha, x_m)
class DistributionSpec {
public:
    static DistributionSpec deterministic(double value);
    static DistributionSpec exponential(double mean);
    static DistributionSpec lognormal(double mu, double sigma);
    static DistributionSpec pareto(double shape, double scale);
    /// Pareto with the scale chosen so that the mean equals `mean` (needs shape > 1).
    static DistributionSpec pareto_with_mean(double shape, double mean);

    /// Builds and validates from a family tag and its parameter list.
    /// Throws InvalidParameters on a wrong count or out-of-domain value.
    static DistributionSpec from_params(DistributionFamily family, std::span<const double> params);

    DistributionFamily family() const noexcept { return family_; }
    std::span<const double> params() const noexcept { return {params_.data(), param_count_}; }

    /// E[X^order] for any real order. Throws UndefinedMoment when the moment
    /// diverges (Pareto with shape <= order, exponential with order <= -1).
    double raw_moment(double order) const;
    double mean() const { return raw_moment(1.0); }

    double sample(RandomStream& rng) const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
    DistributionSpec(DistributionFamily family, std::array<double, 2> params, std::size_t count);

    DistributionFamily family_;
    std::array<double, 2> params_;
    std::size_t param_count_;
};

} // namespace flowcap
