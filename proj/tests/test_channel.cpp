#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "apsel/channel.hpp"
#include "apsel/errors.hpp"

using namespace apsel;

namespace {

// Independent oracle: free space at f, then 35 dB/decade beyond 5 m.
double oracle_loss(double d)
{
    const double c = 299792458.0;
    auto fs = [c](double x) { return 20.0 * std::log10(4.0 * std::numbers::pi * x * 5e9 / c); };
    d = std::max(d, 0.1);
    return d <= 5.0 ? fs(d) : fs(5.0) + 35.0 * std::log10(d / 5.0);
}

}  // namespace

TEST(NoisePower, ReferenceValue)
{
    const double oracle = std::pow(10.0, 0.7) * 1.3803e-23 * 290.0 * 2e7;
    EXPECT_NEAR(noise_power(2e7, 7.0), 4.0124e-13, 4.0124e-13 * 5e-4);
    EXPECT_NEAR(noise_power(2e7, 7.0), oracle, oracle * 1e-4);
}

TEST(NoisePower, ZeroBandwidthAndLinearity)
{
    EXPECT_EQ(noise_power(0.0, 7.0), 0.0);
    EXPECT_NEAR(noise_power(4e7, 7.0), 8.0248e-13, 8.0248e-13 * 5e-4);
    EXPECT_DOUBLE_EQ(noise_power(4e7, 7.0), 2.0 * noise_power(2e7, 7.0));
}

TEST(NoisePower, NegativeBandwidthThrows)
{
    EXPECT_THROW(noise_power(-1.0, 7.0), DomainError);
}

TEST(PathLoss, BreakpointAndDecade)
{
    const ChannelParams p;
    EXPECT_NEAR(two_slope_loss_db(5.0, p), 60.4, 0.1);
    EXPECT_NEAR(two_slope_loss_db(50.0, p), 95.4, 0.1);
    for (double d : {0.1, 1.0, 3.3, 5.0, 7.5, 28.28, 50.0})
        EXPECT_NEAR(two_slope_loss_db(d, p), oracle_loss(d), 1e-3) << d;
}

TEST(PathLoss, OffsetsAdded)
{
    const ChannelParams p;
    EXPECT_NEAR(path_loss_deterministic(5.0, p) - two_slope_loss_db(5.0, p), 25.0, 1e-12);
}

TEST(PathLoss, ClampBelowMinimumDistance)
{
    const ChannelParams p;
    EXPECT_EQ(path_loss_deterministic(0.05, p), path_loss_deterministic(0.1, p));
    EXPECT_EQ(path_loss_deterministic(0.0, p), path_loss_deterministic(0.1, p));
}

TEST(PathLoss, MonotoneOnGrid)
{
    const ChannelParams p;
    double prev = path_loss_deterministic(0.1, p);
    for (int i = 2; i <= 500; ++i) {
        const double cur = path_loss_deterministic(0.1 * i, p);
        ASSERT_GE(cur, prev) << 0.1 * i;
        prev = cur;
    }
}

TEST(PathLoss, ContinuousAtBreakpoint)
{
    const ChannelParams p;
    EXPECT_LT(std::abs(two_slope_loss_db(5.0 - 1e-12, p) - two_slope_loss_db(5.0 + 1e-12, p)), 1e-9);
}

TEST(PathLoss, DisabledFadingIsDeterministic)
{
    ChannelParams p;
    p.shadow_enabled = false;
    RandomStream rng(1);
    EXPECT_EQ(path_loss(5.0, p, rng), path_loss_deterministic(5.0, p));
}

TEST(PathLoss, FadingMoments)
{
    const ChannelParams p;
    RandomStream rng(77);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    const double base = path_loss_deterministic(5.0, p);
    for (int i = 0; i < n; ++i) {
        const double x = path_loss(5.0, p, rng) - base;
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(sd, 3.0, 0.15);
}

TEST(PathLoss, FadingSigmaSwitchesAfterBreakpoint)
{
    const ChannelParams p;
    RandomStream rng(78);
    const int n = 50000;
    double sq = 0.0;
    const double base = path_loss_deterministic(10.0, p);
    for (int i = 0; i < n; ++i)
        sq += std::pow(path_loss(10.0, p, rng) - base, 2);
    EXPECT_NEAR(std::sqrt(sq / n), 4.0, 0.2);
}

TEST(PathLoss, SeededReproducible)
{
    const ChannelParams p;
    RandomStream a(3), b(3);
    for (int i = 0; i < 100; ++i)
        ASSERT_EQ(path_loss(1.0 + i * 0.3, p, a), path_loss(1.0 + i * 0.3, p, b));
}

TEST(Snr, ReferenceExamples)
{
    EXPECT_NEAR(snr_db(25.0, 85.4, 4.0124e-13), 33.57, 0.05);
    EXPECT_NEAR(snr_db(25.0, 118.97, 4.0124e-13), 0.0, 0.05);
    EXPECT_THROW(snr_db(25.0, 80.0, 0.0), DomainError);
    EXPECT_THROW(snr_db(25.0, 80.0, -1e-13), DomainError);
}

TEST(Snr, StrictlyDecreasing)
{
    EXPECT_GT(snr_db(25.0, 80.0, 4e-13), snr_db(25.0, 80.1, 4e-13));
    EXPECT_GT(snr_db(25.0, 80.0, 4e-13), snr_db(25.0, 80.0, 4.1e-13));
}

TEST(Snr, TxPowerInMilliwattsOption)
{
    ChannelParams p;
    p.tx_power_as_mw = true;
    EXPECT_NEAR(p.effective_tx_power(), 10.0 * std::log10(25.0), 1e-12);
}

TEST(Normalize, EndpointsMidpointAndClamp)
{
    const SnrBounds b{10.0, 30.0};
    EXPECT_EQ(normalize_snr(10.0, b), 0.0);
    EXPECT_EQ(normalize_snr(30.0, b), 1.0);
    EXPECT_DOUBLE_EQ(normalize_snr(20.0, b), 0.5);
    EXPECT_EQ(normalize_snr(-100.0, b), 0.0);
    EXPECT_EQ(normalize_snr(1e9, b), 1.0);
    const std::vector<double> in{5.0, 15.0, 50.0};
    const auto out = normalize_snr(in, b);
    for (double v : out) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(Bounds, DiagonalOfWorld)
{
    const ChannelParams p;
    const SnrBounds b = scenario_snr_bounds(20.0, p);
    EXPECT_DOUBLE_EQ(b.snr_min_db, deterministic_snr_db(std::sqrt(800.0), p));
    EXPECT_DOUBLE_EQ(b.snr_max_db, deterministic_snr_db(0.1, p));
    EXPECT_THROW(scenario_snr_bounds(0.0, p), DomainError);
}
