#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "fowthil/errors.hpp"
#include "fowthil/scaling.hpp"

using namespace fowthil;
using namespace fowthil::scaling;

namespace {
constexpr QuantityKind kAllKinds[] = {QuantityKind::length, QuantityKind::velocity,     QuantityKind::time,
                                      QuantityKind::frequency, QuantityKind::acceleration, QuantityKind::force,
                                      QuantityKind::moment, QuantityKind::mass,         QuantityKind::angle};
}

TEST(Scaling, NominalRatios) {
    const ScaleSet s = derive_scales(1.0 / 150.0, 1.0 / 2.5);
    EXPECT_DOUBLE_EQ(s.time_ratio, 1.0 / 60.0);
    EXPECT_DOUBLE_EQ(s.frequency_ratio, 60.0);
    EXPECT_DOUBLE_EQ(s.acceleration_ratio, 24.0);
    // F ~ rho L^2 V^2 with the same fluid at both scales.
    EXPECT_DOUBLE_EQ(s.force_ratio, 1.0 / 140625.0);
    EXPECT_DOUBLE_EQ(s.mass_ratio, 1.0 / (150.0 * 150.0 * 150.0));
    EXPECT_DOUBLE_EQ(s.moment_ratio, s.force_ratio / 150.0);
}

TEST(Scaling, IdentityScaling) {
    const ScaleSet s = derive_scales(1.0, 1.0);
    for (auto k : kAllKinds) EXPECT_EQ(ratio_for(k, s), 1.0);
}

TEST(Scaling, DimensionalClosure) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    for (int i = 0; i < 200; ++i) {
        const ScaleSet s = derive_scales(u(rng), u(rng));
        EXPECT_NEAR(s.time_ratio * s.frequency_ratio, 1.0, 1e-15);
        EXPECT_NEAR(s.acceleration_ratio * s.time_ratio * s.time_ratio / s.length_ratio, 1.0, 1e-14);
        EXPECT_NEAR(s.acceleration_ratio, s.velocity_ratio * s.velocity_ratio / s.length_ratio,
                    1e-14 * s.acceleration_ratio);
    }
}

TEST(Scaling, RejectsNonPositive) {
    EXPECT_THROW(derive_scales(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(derive_scales(1.0, -2.0), InvalidArgument);
    EXPECT_THROW(derive_scales(std::nan(""), 1.0), InvalidArgument);
    EXPECT_THROW(derive_scales(std::numeric_limits<double>::infinity(), 1.0), InvalidArgument);
}

TEST(Scaling, PublishedConversions) {
    const ScaleSet s = nominal_scales();
    EXPECT_NEAR(to_full_scale(4.6, QuantityKind::velocity, s), 11.5, 1e-12);
    EXPECT_NEAR(to_full_scale(0.30, QuantityKind::frequency, s), 0.005, 1e-15);
    EXPECT_NEAR(to_full_scale(2.40, QuantityKind::frequency, s), 0.040, 1e-15);
    EXPECT_NEAR(to_model_scale(178.4, QuantityKind::length, s), 1.189, 5e-4);
    EXPECT_NEAR(to_full_scale(1e-3, QuantityKind::time, s), 0.06, 1e-15);
    EXPECT_EQ(to_full_scale(0.3, QuantityKind::angle, s), 0.3);
}

TEST(Scaling, RoundTripWithinOneUlp) {
    const ScaleSet s = nominal_scales();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> e(-12.0, 12.0);
    for (auto k : kAllKinds) {
        for (int i = 0; i < 5000; ++i) {
            const double v = std::pow(10.0, e(rng));
            const double back = to_model_scale(to_full_scale(v, k, s), k, s);
            EXPECT_LE(std::abs(back - v), std::nextafter(v, 2 * v) - v) << kind_name(k) << " " << v;
        }
    }
}

// Dividing by 150 maps [1.5, 2) into a binade whose spacing is coarser than
// the input spacing over 150, so some distinct inputs collide.
TEST(Scaling, DivisionIsNotInjective) {
    bool collision = false;
    double v = 1.5;
    for (int i = 0; i < 100000 && !collision; ++i) {
        const double next = std::nextafter(v, 2.0);
        collision = (v / 150.0) == (next / 150.0);
        v = next;
    }
    EXPECT_TRUE(collision);
}

TEST(Scaling, KindNames) {
    for (auto k : kAllKinds) {
        const auto parsed = parse_kind(kind_name(k));
        ASSERT_TRUE(parsed.has_value());
        EXPECT_EQ(*parsed, k);
    }
    EXPECT_FALSE(parse_kind("power").has_value());
}
