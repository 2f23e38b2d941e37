#include "trajedi/calibration.hpp"
#include "trajedi/rng.hpp"
#include "trajedi/synthetic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace trajedi;

namespace {

const AnchorGrid unit10 = build_grid({0, 0, 10, 10}, 10);

std::vector<Point> points_of(const Trajectory& t) { return {t.points().begin(), t.points().end()}; }

Trajectory on_anchors(const AnchorPath& cells, const AnchorGrid& grid = unit10) {
    return Trajectory("t", to_points(cells, grid));
}

bool is_anchor(const AnchorGrid& grid, const Point& p) {
    return nearest_anchor(grid, p).distance == 0.0;
}

} // namespace

TEST(Align, SingleCommonAnchor) {
    const auto params = CalibrationParams::defaults_for(unit10);
    const Trajectory t("t", {{3.4, 3.6}, {3.5, 3.5}, {3.7, 3.3}});
    EXPECT_EQ(align(t, unit10, params.align_threshold), (AnchorPath{{3, 3}}));
}

TEST(Align, DropsPointsBeyondThreshold) {
    const Trajectory t("t", {{0.5, 0.5}, {1.0, 1.0}, {2.5, 0.5}});
    EXPECT_EQ(align(t, unit10, 0.2), (AnchorPath{{0, 0}, {0, 2}}));
    EXPECT_TRUE(align(Trajectory("t", {{1.0, 1.0}}), unit10, 0.2).empty());
}

TEST(Align, KeepsNonConsecutiveDuplicates) {
    const Trajectory t("t", {{0.5, 0.5}, {1.5, 0.5}, {1.6, 0.4}, {0.5, 0.5}});
    EXPECT_EQ(align(t, unit10, 0.5), (AnchorPath{{0, 0}, {0, 1}, {0, 0}}));
}

TEST(Complement, ShortSequencesUnchanged) {
    EXPECT_TRUE(complement({}, unit10, 1.0).empty());
    EXPECT_EQ(complement({{4, 4}}, unit10, 1.0), (AnchorPath{{4, 4}}));
}

TEST(Complement, AdjacentAnchorsGainNothing) {
    const double thr = CalibrationParams::defaults_for(unit10).complement_threshold;
    EXPECT_EQ(complement({{2, 2}, {2, 3}}, unit10, thr), (AnchorPath{{2, 2}, {2, 3}}));
    EXPECT_EQ(complement({{2, 2}, {3, 3}}, unit10, thr), (AnchorPath{{2, 2}, {3, 3}}));
}

TEST(Complement, CollinearMiddleAnchorIsInserted) {
    EXPECT_EQ(complement({{5, 1}, {5, 3}}, unit10, 0.5), (AnchorPath{{5, 1}, {5, 2}, {5, 3}}));
    EXPECT_EQ(complement({{0, 0}, {4, 4}}, unit10, 0.1),
              (AnchorPath{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}));
}

TEST(Complement, CandidatesBehindThePreviousPointAreRejected) {
    // Candidates by distance from a1: (0,1), (1,0), (1,1), (1,2). (1,0) turns
    // backwards and (1,1) is exactly perpendicular to the segment.
    EXPECT_EQ(complement({{0, 0}, {0, 2}}, unit10, 1.0),
              (AnchorPath{{0, 0}, {0, 1}, {1, 2}, {0, 2}}));
}

TEST(Complement, CoincidentConsecutiveAnchorsAreAnInvariantViolation) {
    EXPECT_THROW(complement({{1, 1}, {1, 1}}, unit10, 1.0), InvariantError);
}

TEST(Calibrate, AdjacentAnchorTrajectoryIsAFixedPoint) {
    const auto params = CalibrationParams::defaults_for(unit10);
    const auto t = on_anchors({{0, 0}, {0, 1}, {1, 2}, {2, 2}, {2, 1}, {3, 0}});
    const auto r = calibrate(t, unit10, params);
    EXPECT_FALSE(r.uncalibratable);
    EXPECT_EQ(r.trajectory, t);
}

TEST(Calibrate, AllPointsBeyondThresholdIsFlagged) {
    const CalibrationParams params{0.1, 0.5};
    const Trajectory t("t", {{1.0, 1.0}, {2.0, 2.0}});
    const auto r = calibrate(t, unit10, params);
    EXPECT_TRUE(r.uncalibratable);
    EXPECT_EQ(r.trajectory, t);
}

TEST(Calibrate, NoisyRowBecomesStraightRow) {
    const auto params = CalibrationParams::defaults_for(unit10);
    const Trajectory t("t", {{0.6, 4.3}, {0.4, 4.7}, {2.7, 4.6}, {3.5, 4.2}, {5.3, 4.8}, {6.6, 4.4}});
    // Cells 1 and 4 of the row are skipped by the samples and restored by complement.
    EXPECT_EQ(points_of(calibrate(t, unit10, params).trajectory),
              to_points({{4, 0}, {4, 1}, {4, 2}, {4, 3}, {4, 4}, {4, 5}, {4, 6}}, unit10));
}

TEST(CalibrationParams, Validation) {
    EXPECT_THROW((CalibrationParams{0.0, 1.0}.validate()), UsageError);
    EXPECT_THROW((CalibrationParams{1.0, -1.0}.validate()), UsageError);
    EXPECT_NO_THROW(CalibrationParams::defaults_for(unit10).validate());
}

TEST(CalibrateProperties, RandomNoisyWalks) {
    const auto grid = build_grid({0, 0, 40, 40}, 40);
    const auto params = CalibrationParams::defaults_for(grid);
    Rng rng(99);
    for (int k = 0; k < 60; ++k) {
        const auto walk = generate_walk(grid, 80, rng);
        const auto degraded = add_noise(downsample(walk, rng, 40.0, 15.0), rng, 0.3);
        const auto r = calibrate(degraded, grid, params);
        ASSERT_FALSE(r.uncalibratable);
        const auto& out = r.trajectory;

        EXPECT_EQ(out.id(), degraded.id());
        for (std::size_t i = 0; i < out.size(); ++i) {
            EXPECT_TRUE(is_anchor(grid, out[i]));
            if (i > 0) {
                EXPECT_NE(out[i], out[i - 1]);
            }
        }
        EXPECT_GE(out.size(), align(degraded, grid, params.align_threshold).size());
        EXPECT_EQ(calibrate(out, grid, params).trajectory, out) << "not idempotent at walk " << k;
        EXPECT_EQ(calibrate(walk, grid, params).trajectory, walk) << "walk " << k << " moved";
    }
}

TEST(CalibrateProperties, RandomPointClouds) {
    const auto grid = build_grid({-5, -5, 5, 15}, 12);
    const auto params = CalibrationParams::defaults_for(grid);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> px(-6, 6), py(-6, 16);
    for (int k = 0; k < 200; ++k) {
        std::vector<Point> pts(1 + gen() % 20);
        for (auto& p : pts) p = {px(gen), py(gen)};
        const Trajectory t("t", pts);
        const auto r = calibrate(t, grid, params);
        if (r.uncalibratable) {
            EXPECT_EQ(r.trajectory, t);
            continue;
        }
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
            EXPECT_TRUE(is_anchor(grid, r.trajectory[i]));
            if (i > 0) {
                EXPECT_NE(r.trajectory[i], r.trajectory[i - 1]);
            }
        }
    }
}
