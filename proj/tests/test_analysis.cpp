#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fowthil/analysis.hpp"
#include "fowthil/errors.hpp"

using namespace fowthil;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> decay(double f_n, double zeta, double dt, double duration, double amp = 1.0) {
    const double wn = 2 * kPi * f_n;
    const double wd = wn * std::sqrt(1 - zeta * zeta);
    std::vector<double> x;
    for (double t = 0.0; t <= duration; t += dt) x.push_back(amp * std::exp(-zeta * wn * t) * std::cos(wd * t));
    return x;
}

double sample_variance(const std::vector<double>& x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / x.size();
}
}  // namespace

TEST(Welch, ToneIntegral) {
    const double dt = 0.6, a = 3.0;
    std::vector<double> x;
    for (int i = 0; i < 6000; ++i) x.push_back(a * std::sin(2 * kPi * 0.04 * i * dt + 0.3));
    const Spectrum s = welch(x, dt);
    EXPECT_NEAR(s.integral(), a * a / 2, 0.02 * a * a / 2);
    EXPECT_NEAR(s.frequency[s.nearest_bin(0.04)], 0.04, s.resolution);
    EXPECT_EQ(s.window, "hann");
    EXPECT_EQ(s.segments, 15);
}

TEST(Welch, WhiteNoiseFlatAndParseval) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, 2.0);
        std::vector<double> x(1 << 15);
        for (auto& v : x) v = n(rng);
        const double dt = 0.1;
        const Spectrum s = welch(x, dt);
        EXPECT_NEAR(s.integral(), 4.0, 0.03 * 4.0);
        // Flat level 2 sigma^2 dt, checked over wide bands.
        const double level = 2.0 * 4.0 * dt;
        for (double f : {0.5, 1.5, 3.0, 4.5}) EXPECT_NEAR(s.band_mean(f, 0.2), level, 0.15 * level);
    }
}

TEST(Welch, ParsevalForMixedSignals) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(20000);
        double lp = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            lp = 0.9 * lp + 0.44 * n(rng);
            x[i] = lp + std::sin(0.05 * i) + 0.1 * n(rng);
        }
        const double var = sample_variance(x);
        // One rectangular segment is exact Parseval.
        const auto whole = welch(x, 0.06, x.size(), 0.0, Window::rectangular);
        EXPECT_NEAR(whole.integral(), var, 1e-9 * var);
        EXPECT_NEAR(welch(x, 0.06, 5000).integral(), var, 0.05 * var);
    }
}

TEST(Welch, ZeroSignal) {
    const Spectrum s = welch(std::vector<double>(512, 0.0), 0.1);
    for (double v : s.psd) EXPECT_EQ(v, 0.0);
}

TEST(Welch, RejectsShortSeriesAndBadOverlap) {
    const std::vector<double> x(100, 1.0);
    EXPECT_THROW(welch(x, 0.1, 200), InvalidArgument);
    EXPECT_THROW(welch(x, 0.1, 50, 1.0), InvalidArgument);
    EXPECT_THROW(welch(x, 0.0, 50), InvalidArgument);
}

TEST(Decay, SingleModeRecovery) {
    const auto x = decay(0.005, 0.05, 0.6, 2000.0);
    const auto m = decay_metrics(x, 0.6);
    ASSERT_EQ(m.f_n.size(), 1u);
    EXPECT_NEAR(m.f_n[0], 0.005, 0.005 * 0.005);
    EXPECT_NEAR(m.zeta[0], 0.05, 0.05 * 0.05);
}

TEST(Decay, UndampedHasZeroDamping) {
    const auto x = decay(0.04, 0.0, 0.6, 500.0);
    const auto m = decay_metrics(x, 0.6);
    EXPECT_NEAR(m.zeta[0], 0.0, 1e-3);
    EXPECT_NEAR(m.f_n[0], 0.04, 0.04 * 0.005);
}

TEST(Decay, AmplitudeScalingInvariant) {
    const auto a = decay_metrics(decay(0.04, 0.03, 0.6, 600.0), 0.6);
    const auto b = decay_metrics(decay(0.04, 0.03, 0.6, 600.0, 1234.5), 0.6);
    EXPECT_NEAR(a.f_n[0], b.f_n[0], 1e-12);
    EXPECT_NEAR(a.zeta[0], b.zeta[0], 1e-9);
}

TEST(Decay, EquilibriumOffsetRemoved) {
    auto x = decay(0.04, 0.03, 0.6, 600.0);
    for (auto& v : x) v += 7.0;
    const auto m = decay_metrics(x, 0.6, 1, 7.0);
    EXPECT_NEAR(m.f_n[0], 0.04, 0.04 * 0.005);
}

TEST(Decay, TwoModeSplit) {
    const auto lo = decay(0.005, 0.05, 0.6, 1500.0);
    const auto hi = decay(0.04, 0.03, 0.6, 1500.0, 0.2);
    std::vector<double> x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + hi[i];
    const auto m = decay_metrics(x, 0.6, 2, 0.0, 0.005, 0.04);
    ASSERT_EQ(m.f_n.size(), 2u);
    EXPECT_NEAR(m.f_n[0], 0.005, 0.005 * 0.02);
    EXPECT_NEAR(m.f_n[1], 0.04, 0.04 * 0.02);
    EXPECT_NEAR(m.zeta[1], 0.03, 0.03 * 0.15);
}

TEST(Decay, TooFewPeaks) {
    const auto x = decay(0.005, 0.05, 0.6, 150.0);
    EXPECT_THROW(decay_metrics(x, 0.6), InsufficientData);
}

TEST(Stats, ConstantSeries) {
    const auto s = stats(std::vector<double>(50, 2.5));
    EXPECT_EQ(s.mean, 2.5);
    EXPECT_EQ(s.std, 0.0);
    EXPECT_EQ(s.ti, 0.0);
}

TEST(Stats, UnbiasedStd) {
    const auto s = stats(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.std, std::sqrt(5.0 / 3.0));
    EXPECT_DOUBLE_EQ(s.ti, std::sqrt(5.0 / 3.0) / 2.5);
    EXPECT_THROW(stats(std::vector<double>{}), InvalidArgument);
    EXPECT_DOUBLE_EQ(rms(std::vector<double>{3.0, -4.0}), std::sqrt(12.5));
}
