#include <random>

#include <gtest/gtest.h>

#include "fowthil/errors.hpp"
#include "fowthil/thrust_curve.hpp"

using namespace fowthil;

TEST(ThrustCurve, ExactAtNodesAndFlatOutside) {
    const ThrustCurve c({2, 4, 6, 8}, {0.3, 0.6, 0.75, 0.8});
    EXPECT_DOUBLE_EQ(c.ct(4.0), 0.6);
    EXPECT_DOUBLE_EQ(c.ct(8.0), 0.8);
    EXPECT_DOUBLE_EQ(c.ct(0.5), 0.3);
    EXPECT_DOUBLE_EQ(c.ct(30.0), 0.8);
}

TEST(ThrustCurve, MonotoneDataGivesMonotoneCurve) {
    const ThrustCurve c({2, 4, 6, 8, 10, 12}, {0.25, 0.50, 0.72, 0.83, 0.90, 0.95});
    double prev = c.ct(1.0);
    for (double x = 1.0; x <= 13.0; x += 0.001) {
        const double v = c.ct(x);
        EXPECT_GE(v, prev - 1e-15);
        EXPECT_LE(v, 0.95 + 1e-15);
        prev = v;
    }
}

TEST(ThrustCurve, AnchorInsertsAndOverwrites) {
    ThrustCurve c({2, 4, 6, 8}, {0.3, 0.6, 0.75, 0.8});
    c.anchor(7.2146, 0.7948);
    EXPECT_DOUBLE_EQ(c.ct(7.2146), 0.7948);
    EXPECT_EQ(c.tsr_nodes().size(), 5u);
    c.anchor(4.0, 0.55);
    EXPECT_DOUBLE_EQ(c.ct(4.0), 0.55);
    EXPECT_EQ(c.tsr_nodes().size(), 5u);
}

TEST(ThrustCurve, RejectsBadTables) {
    EXPECT_THROW(ThrustCurve({1, 1}, {0.1, 0.2}), InvalidArgument);
    EXPECT_THROW(ThrustCurve({1, 2}, {0.1}), InvalidArgument);
    EXPECT_THROW(ThrustCurve({1, 2}, {-0.1, 0.2}), InvalidArgument);
}
