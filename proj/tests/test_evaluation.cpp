#include "trajedi/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace trajedi;

namespace {

DistanceMatrix from_pairs(std::size_t n, const std::vector<double>& upper) {
    DistanceMatrix m(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, upper.at(k++));
    }
    return m;
}

DistanceMatrix random_matrix(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> v(0.0, 100.0);
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, v(gen));
    }
    return m;
}

DistanceMatrix permuted(const DistanceMatrix& m, const std::vector<std::size_t>& perm) {
    DistanceMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) out.set(perm[i], perm[j], m(i, j));
    }
    return out;
}

DistanceMatrix scaled(const DistanceMatrix& m, double c) {
    DistanceMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) out.set(i, j, c * m(i, j));
    }
    return out;
}

Dataset two_lines(std::size_t n) {
    std::vector<Point> pts(n, Point{0, 0});
    for (std::size_t i = 0; i < n; ++i) pts[i] = {double(i), 0};
    return Dataset({Trajectory("a", pts), Trajectory("b", pts)});
}

PlanEntry entry(std::string id, std::size_t count) {
    PlanEntry e;
    e.id = std::move(id);
    e.calibrated_points = count;
    return e;
}

} // namespace

TEST(Accuracy, Examples) {
    const auto t = from_pairs(3, {2, 4, 6});
    EXPECT_EQ(accuracy(t, t).value, 0.0);
    EXPECT_DOUBLE_EQ(accuracy(from_pairs(3, {3, 3, 3}), from_pairs(3, {2, 2, 2})).value, 0.5);
    const auto r = accuracy(from_pairs(3, {3, 4, 5}), t);
    EXPECT_DOUBLE_EQ(r.value, 1.0 / 6.0);
    EXPECT_EQ(r.pair_count, 3u);
}

TEST(Accuracy, DimensionMismatch) {
    EXPECT_THROW(accuracy(DistanceMatrix(3), DistanceMatrix(4)), UsageError);
}

TEST(Accuracy, AllZeroTruth) {
    EXPECT_EQ(accuracy(DistanceMatrix(3), DistanceMatrix(3)).value, 0.0);
    EXPECT_TRUE(std::isinf(accuracy(from_pairs(3, {0, 1, 0}), DistanceMatrix(3)).value));
    EXPECT_EQ(accuracy(DistanceMatrix(1), DistanceMatrix(1)).pair_count, 0u);
}

TEST(Accuracy, ScaleAndRelabelInvariance) {
    std::mt19937_64 gen(31);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + gen() % 8;
        const auto s = random_matrix(gen, n);
        const auto t = random_matrix(gen, n);
        const double base = accuracy(s, t).value;
        const double c = 0.01 + static_cast<double>(gen() % 1000);
        EXPECT_NEAR(accuracy(scaled(s, c), scaled(t, c)).value, base, 1e-12 * (1 + base));
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), gen);
        EXPECT_NEAR(accuracy(permuted(s, perm), permuted(t, perm)).value, base, 1e-12 * (1 + base));
        EXPECT_GE(base, 0.0);
    }
}

TEST(Efficiency, Examples) {
    const auto ds = two_lines(100);
    EXPECT_EQ(efficiency({}, ds).value, 0.0);
    EXPECT_EQ(efficiency({{entry("a", 100), entry("b", 100)}}, ds).value, 1.0);
    const auto r = efficiency({{entry("a", 50), entry("b", 0)}}, ds);
    EXPECT_EQ(r.value, 0.25);
    EXPECT_EQ(r.calibrated_points, 50u);
    EXPECT_EQ(r.total_points, 200u);
}

TEST(Efficiency, UnknownIdIsRejected) {
    EXPECT_THROW(efficiency({{entry("zzz", 1)}}, two_lines(3)), UsageError);
}

TEST(Efficiency, MonotoneInAddedSegments) {
    const auto ds = two_lines(50);
    std::mt19937_64 gen(8);
    CalibrationPlan plan;
    double last = 0.0;
    for (int k = 0; k < 10; ++k) {
        plan.entries.push_back(entry(k % 2 ? "a" : "b", gen() % 10));
        const double now = efficiency(plan, ds).value;
        EXPECT_GE(now, last);
        last = now;
    }
}

TEST(CostCurve, OneRowPerLength) {
    const auto grid = build_grid({0, 0, 100, 100}, 100);
    const auto params = CalibrationParams::defaults_for(grid);
    const std::vector<std::size_t> lengths{20, 40};
    const auto rows = calibration_cost_curve(lengths, 3, grid, params, 1);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].points_per_trajectory, 20u);
    EXPECT_EQ(rows[1].trials, 3u);
    EXPECT_GE(rows[0].mean_calibration_ms, 0.0);

    const std::vector<std::size_t> single{30};
    EXPECT_EQ(calibration_cost_curve(single, 1, grid, params, 1).size(), 1u);
    EXPECT_THROW(calibration_cost_curve({}, 1, grid, params, 1), UsageError);
    EXPECT_THROW(calibration_cost_curve(single, 0, grid, params, 1), UsageError);
}

TEST(CostCurve, InputsAreSeeded) {
    const auto grid = build_grid({0, 0, 100, 100}, 100);
    const auto a = cost_curve_inputs(50, 4, grid, 9);
    EXPECT_EQ(a, cost_curve_inputs(50, 4, grid, 9));
    EXPECT_NE(a, cost_curve_inputs(50, 4, grid, 10));
    ASSERT_EQ(a.size(), 4u);
    EXPECT_EQ(a[0].size(), 50u);
}

TEST(CostCurve, CsvRoundTrip) {
    const std::vector<CostCurveRow> rows{{250, 0.125, 10}, {500, 1.0 / 3.0, 10}};
    std::stringstream io;
    write_cost_curve_csv(io, rows);
    const auto back = read_cost_curve_csv(io);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].points_per_trajectory, 500u);
    EXPECT_EQ(back[1].mean_calibration_ms, 1.0 / 3.0);
    EXPECT_EQ(back[0].trials, 10u);
    std::istringstream bad("points_per_trajectory,mean_calibration_ms,trials\n1,x,2\n");
    EXPECT_THROW(read_cost_curve_csv(bad), ParseError);
}
