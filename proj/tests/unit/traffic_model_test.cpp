#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flowcap/errors.hpp"
#include "flowcap/traffic_model.hpp"

using namespace flowcap;

namespace {

TrafficModel model(double lambda, DistributionSpec s, DistributionSpec d) {
    TrafficModel m;
    m.lambda = lambda;
    m.size_dist = s;
    m.duration_dist = d;
    return m;
}

} // namespace

TEST(MeanRate, DeterministicProduct) {
    EXPECT_DOUBLE_EQ(mean_rate(model(10, DistributionSpec::deterministic(1000), DistributionSpec::deterministic(1))),
                     10000.0);
}

TEST(MeanRate, LogNormalSizes) {
    const auto m = model(2, DistributionSpec::lognormal(std::log(1000.0), 1.0), DistributionSpec::deterministic(1));
    EXPECT_NEAR(mean_rate(m), 2.0 * 1000.0 * std::exp(0.5), 1e-9);
    EXPECT_NEAR(mean_rate(m), 3297.44, 0.01);
}

TEST(MeanRate, HeavyTailedSizeHasNoMean) {
    EXPECT_THROW(mean_rate(model(1, DistributionSpec::pareto(0.9, 1), DistributionSpec::deterministic(1))),
                 UndefinedMoment);
}

TEST(RateVariance, DeterministicPlugIn) {
    EXPECT_DOUBLE_EQ(
        rate_variance(model(5, DistributionSpec::deterministic(100), DistributionSpec::deterministic(10))), 5000.0);
}

TEST(RateVariance, ExponentialSizesMatchMonteCarlo) {
    const auto m = model(1, DistributionSpec::exponential(100), DistributionSpec::deterministic(10));
    EXPECT_NEAR(rate_variance(m), 2000.0, 1e-9);

    std::mt19937_64 eng(8);
    std::exponential_distribution<double> s(0.01);
    double sum = 0.0;
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double x = s(eng);
        sum += x * x / 10.0;
    }
    EXPECT_NEAR(sum / n, 2000.0, 0.02 * 2000.0);
}

TEST(RateVariance, ExponentialDurationsDiverge) {
    EXPECT_THROW(rate_variance(model(1, DistributionSpec::deterministic(1), DistributionSpec::exponential(2))),
                 UndefinedMoment);
}

TEST(MeanActiveFlows, LittlesLaw) {
    EXPECT_DOUBLE_EQ(
        mean_active_flows(model(2, DistributionSpec::deterministic(1), DistributionSpec::deterministic(5))), 10.0);
    EXPECT_NEAR(
        mean_active_flows(model(2, DistributionSpec::deterministic(1), DistributionSpec::pareto_with_mean(2.5, 5))),
        10.0, 1e-12);
    EXPECT_THROW(mean_active_flows(model(2, DistributionSpec::deterministic(1), DistributionSpec::pareto(1.0, 5))),
                 UndefinedMoment);
}

TEST(Moments, ZeroArrivalRateIsZero) {
    // Holds even when the moments of the families diverge.
    const auto m = model(0, DistributionSpec::pareto(0.5, 1), DistributionSpec::exponential(3));
    EXPECT_EQ(mean_rate(m), 0.0);
    EXPECT_EQ(rate_variance(m), 0.0);
    EXPECT_EQ(mean_active_flows(m), 0.0);
}

TEST(Moments, LinearInLambda) {
    const auto base = model(3.7, DistributionSpec::lognormal(5, 0.8), DistributionSpec::pareto(3.0, 0.4));
    for (double c : {0.5, 2.0, 8.0, 1024.0}) {
        auto scaled = base;
        scaled.lambda *= c;
        EXPECT_NEAR(mean_rate(scaled), c * mean_rate(base), 1e-12 * c * mean_rate(base));
        EXPECT_NEAR(rate_variance(scaled), c * rate_variance(base), 1e-12 * c * rate_variance(base));
        EXPECT_NEAR(mean_active_flows(scaled), c * mean_active_flows(base), 1e-12 * c * mean_active_flows(base));
    }
}

TEST(Moments, InsensitiveToDurationFamily) {
    const auto s = DistributionSpec::exponential(5000);
    const double n_exp = mean_active_flows(model(4, s, DistributionSpec::exponential(2)));
    const double n_det = mean_active_flows(model(4, s, DistributionSpec::deterministic(2)));
    const double n_par = mean_active_flows(model(4, s, DistributionSpec::pareto_with_mean(2.5, 2)));
    EXPECT_DOUBLE_EQ(n_exp, n_det);
    EXPECT_NEAR(n_par, n_det, 1e-12);
}

TEST(Moments, DeterministicIdentity) {
    const double s = 1234.0, d = 3.0;
    const auto m = model(7, DistributionSpec::deterministic(s), DistributionSpec::deterministic(d));
    EXPECT_DOUBLE_EQ(rate_variance(m) * d, mean_rate(m) * s);
}

TEST(Moments, Pure) {
    const auto m = model(1.25, DistributionSpec::lognormal(3, 1.5), DistributionSpec::pareto(4, 1));
    const auto a = theoretical_moments(m);
    const auto b = theoretical_moments(m);
    EXPECT_EQ(a.mean_rate, b.mean_rate);
    EXPECT_EQ(a.rate_variance, b.rate_variance);
    EXPECT_EQ(a.mean_active_flows, b.mean_active_flows);
}

TEST(TrafficModel, NegativeLambdaRejected) {
    auto m = model(-1, DistributionSpec::deterministic(1), DistributionSpec::deterministic(1));
    EXPECT_THROW(m.validate(), InvalidParameters);
}

TEST(FlowRecord, ActivityIsClosedInterval) {
    const auto f = FlowRecord::make(2, 1000, 10);
    EXPECT_TRUE(f.active_at(2));
    EXPECT_TRUE(f.active_at(12));
    EXPECT_FALSE(f.active_at(12.0001));
    EXPECT_DOUBLE_EQ(f.rate_at(5), 100);
    EXPECT_DOUBLE_EQ(f.bits_between(0, 7), 500);
    EXPECT_THROW(FlowRecord::make(0, 1, 0), InvalidParameters);
}
