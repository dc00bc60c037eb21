#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "flowcap/distribution.hpp"
#include "flowcap/errors.hpp"
#include "support/oracles.hpp"

using namespace flowcap;

TEST(Distribution, DeterministicAlwaysReturnsValue) {
    RandomStream rng(3);
    const auto d = DistributionSpec::deterministic(7.5);
    for (int i = 0; i < 1000; ++i)
        ASSERT_EQ(d.sample(rng), 7.5);
}

TEST(Distribution, ExponentialSampleMean) {
    RandomStream rng(11);
    const auto d = DistributionSpec::exponential(2.0);
    double sum = 0.0;
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i)
        sum += d.sample(rng);
    EXPECT_NEAR(sum / n, 2.0, 0.02);
}

TEST(Distribution, ExponentialPassesKs) {
    RandomStream rng(5);
    const auto d = DistributionSpec::exponential(0.5);
    std::vector<double> xs(20000);
    for (auto& x : xs)
        x = d.sample(rng);
    EXPECT_LT(oracle::ks_statistic_exponential(xs, 2.0), oracle::ks_critical_001(xs.size()));
}

TEST(Distribution, LogNormalMeanClosedFormAndMonteCarlo) {
    const double mu = std::log(1000.0);
    const auto d = DistributionSpec::lognormal(mu, 1.0);
    EXPECT_NEAR(d.mean(), 1648.7212707001282, 1e-9);

    std::mt19937_64 eng(2024);
    std::lognormal_distribution<double> ref(mu, 1.0);
    double sum = 0.0;
    constexpr int n = 2'000'000;
    for (int i = 0; i < n; ++i)
        sum += ref(eng);
    EXPECT_NEAR(d.mean(), sum / n, 0.01 * d.mean());

    RandomStream rng(9);
    double own = 0.0;
    for (int i = 0; i < n; ++i)
        own += d.sample(rng);
    EXPECT_NEAR(own / n, d.mean(), 0.01 * d.mean());
}

TEST(Distribution, ParetoMoments) {
    const auto d = DistributionSpec::pareto(2.5, 3.0);
    EXPECT_DOUBLE_EQ(d.mean(), 2.5 * 3.0 / 1.5);
    EXPECT_DOUBLE_EQ(d.raw_moment(-1.0), 2.5 / (3.0 * 3.5));
    EXPECT_THROW(d.raw_moment(2.5), UndefinedMoment);
    EXPECT_THROW(d.raw_moment(3.0), UndefinedMoment);

    const auto with_mean = DistributionSpec::pareto_with_mean(2.5, 5.0);
    EXPECT_NEAR(with_mean.mean(), 5.0, 1e-12);
}

TEST(Distribution, ParetoShapeBelowOneHasNoMean) {
    EXPECT_THROW(DistributionSpec::pareto(0.9, 1.0).mean(), UndefinedMoment);
    EXPECT_THROW(DistributionSpec::pareto(1.0, 1.0).mean(), UndefinedMoment);
}

TEST(Distribution, ExponentialInverseMomentDiverges) {
    const auto d = DistributionSpec::exponential(2.0);
    EXPECT_THROW(d.raw_moment(-1.0), UndefinedMoment);
    EXPECT_DOUBLE_EQ(d.raw_moment(2.0), 8.0);
}

TEST(Distribution, InvalidParametersRejected) {
    EXPECT_THROW(DistributionSpec::exponential(0.0), InvalidParameters);
    EXPECT_THROW(DistributionSpec::exponential(-1.0), InvalidParameters);
    EXPECT_THROW(DistributionSpec::deterministic(0.0), InvalidParameters);
    EXPECT_THROW(DistributionSpec::lognormal(0.0, -1.0), InvalidParameters);
    EXPECT_THROW(DistributionSpec::pareto(0.0, 1.0), InvalidParameters);
    EXPECT_THROW(DistributionSpec::pareto(2.0, 0.0), InvalidParameters);
    EXPECT_THROW(DistributionSpec::pareto_with_mean(1.0, 2.0), UndefinedMoment);
    EXPECT_THROW(DistributionSpec::deterministic(std::nan("")), InvalidParameters);
}

TEST(Distribution, SeededSequencesRepeat) {
    const auto d = DistributionSpec::pareto(1.5, 2.0);
    RandomStream a(77, 2), b(77, 2), c(77, 3);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = d.sample(a);
        ASSERT_EQ(x, d.sample(b));
        differs |= x != d.sample(c);
    }
    EXPECT_TRUE(differs);
}

TEST(Distribution, UniformOpenStaysInside) {
    RandomStream rng(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}
