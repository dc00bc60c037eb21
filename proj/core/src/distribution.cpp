#include "flowcap/distribution.hpp"

#include <cmath>
#include <string>

#include "flowcap/errors.hpp"

namespace flowcap {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string describe(double v) { return std::to_string(v); }

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
}

double RandomStream::uniform_open() {
    // 53 random bits mapped to the centre of each of 2^53 cells, never 0 or 1.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::string_view family_name(DistributionFamily family) noexcept {
    switch (family) {
    case DistributionFamily::Deterministic: return "deterministic";
    case DistributionFamily::Exponential: return "exponential";
    case DistributionFamily::LogNormal: return "lognormal";
    case DistributionFamily::ParetoTypeI: return "pareto";
    }
    return "unknown";
}

DistributionSpec::DistributionSpec(DistributionFamily family, std::array<double, 2> params,
                                   std::size_t count)
    : family_(family), params_(params), param_count_(count) {}

DistributionSpec DistributionSpec::deterministic(double value) {
    if (!positive_finite(value))
        throw InvalidParameters("deterministic value must be > 0, got " + describe(value));
    return {DistributionFamily::Deterministic, {value, 0.0}, 1};
}

DistributionSpec DistributionSpec::exponential(double mean) {
    if (!positive_finite(mean))
        throw InvalidParameters("exponential mean must be > 0, got " + describe(mean));
    return {DistributionFamily::Exponential, {mean, 0.0}, 1};
}

DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
    if (!std::isfinite(mu))
        throw InvalidParameters("lognormal mu must be finite");
    if (!positive_finite(sigma))
        throw InvalidParameters("lognormal sigma must be > 0, got " + describe(sigma));
    return {DistributionFamily::LogNormal, {mu, sigma}, 2};
}

DistributionSpec DistributionSpec::pareto(double shape, double scale) {
    if (!positive_finite(shape))
        throw InvalidParameters("pareto shape must be > 0, got " + describe(shape));
    if (!positive_finite(scale))
        throw InvalidParameters("pareto scale must be > 0, got " + describe(scale));
    return {DistributionFamily::ParetoTypeI, {shape, scale}, 2};
}

DistributionSpec DistributionSpec::pareto_with_mean(double shape, double mean) {
    if (!(shape > 1.0))
        throw UndefinedMoment("pareto mean requires shape > 1, got " + describe(shape));
    if (!positive_finite(mean))
        throw InvalidParameters("pareto mean must be > 0, got " + describe(mean));
    return pareto(shape, mean * (shape - 1.0) / shape);
}

DistributionSpec DistributionSpec::from_params(DistributionFamily family,
                                               std::span<const double> params) {
    const std::size_t expected = family == DistributionFamily::Deterministic ||
                                         family == DistributionFamily::Exponential
                                     ? 1
                                     : 2;
    if (params.size() != expected) {
        throw InvalidParameters(std::string(family_name(family)) + " takes " +
                                std::to_string(expected) + " parameter(s), got " +
                                std::to_string(params.size()));
    }
    switch (family) {
    case DistributionFamily::Deterministic: return deterministic(params[0]);
    case DistributionFamily::Exponential: return exponential(params[0]);
    case DistributionFamily::LogNormal: return lognormal(params[0], params[1]);
    case DistributionFamily::ParetoTypeI: return pareto(params[0], params[1]);
    }
    throw InvalidParameters("unknown distribution family");
}

double DistributionSpec::raw_moment(double order) const {
    if (order == 0.0)
        return 1.0;
    switch (family_) {
    case DistributionFamily::Deterministic:
        return std::pow(params_[0], order);
    case DistributionFamily::Exponential:
        if (order <= -1.0) {
            throw UndefinedMoment("exponential moment of order " + describe(order) +
                                  " diverges (density is positive at 0)");
        }
        return std::tgamma(order + 1.0) * std::pow(params_[0], order);
    case DistributionFamily::LogNormal: {
        const double mu = params_[0];
        const double sigma = params_[1];
        return std::exp(order * mu + 0.5 * order * order * sigma * sigma);
    }
    case DistributionFamily::ParetoTypeI: {
        const double shape = params_[0];
        const double scale = params_[1];
        if (shape <= order) {
            throw UndefinedMoment("pareto moment of order " + describe(order) +
                                  " requires shape > order, got shape " + describe(shape));
        }
        return shape * std::pow(scale, order) / (shape - order);
    }
    }
    throw InvalidParameters("unknown distribution family");
}

double DistributionSpec::sample(RandomStream& rng) const {
    switch (family_) {
    case DistributionFamily::Deterministic:
        return params_[0];
    case DistributionFamily::Exponential:
        return -params_[0] * std::log(rng.uniform_open());
    case DistributionFamily::LogNormal: {
        std::normal_distribution<double> normal(params_[0], params_[1]);
        return std::exp(normal(rng.engine()));
    }
    case DistributionFamily::ParetoTypeI:
        return params_[1] * std::pow(rng.uniform_open(), -1.0 / params_[0]);
    }
    throw InvalidParameters("unknown distribution family");
}

} // namespace flowcap
