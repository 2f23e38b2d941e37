#ifndef TRAJEDI_EVALUATION_HPP
#define TRAJEDI_EVALUATION_HPP

#include "trajedi/calibration.hpp"
#include "trajedi/csv.hpp"
#include "trajedi/distance_matrix.hpp"
#include "trajedi/errors.hpp"
#include "trajedi/grid.hpp"
#include "trajedi/rng.hpp"
#include "trajedi/scheme.hpp"
#include "trajedi/synthetic.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace trajedi {

struct AccuracyReport {
    /// Mean |scheme - truth| over off-diagonal pairs divided by the mean truth
    /// distance over the same pairs. Infinity when truth is all zero but the
    /// scheme is not.
    double value = 0.0;
    std::size_t pair_count = 0;
};

inline AccuracyReport accuracy(const DistanceMatrix& scheme, const DistanceMatrix& truth) {
    if (scheme.size() != truth.size()) {
        throw UsageError("accuracy: matrix sizes differ (" + std::to_string(scheme.size()) +
                         " vs " + std::to_string(truth.size()) + ")");
    }
    const auto n = truth.size();
    double diff_sum = 0.0;
    double truth_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            diff_sum += std::abs(scheme(i, j) - truth(i, j));
            truth_sum += truth(i, j);
            ++pairs;
        }
    }
    if (pairs == 0 || diff_sum == 0.0) {
        return {0.0, pairs};
    }
    if (truth_sum == 0.0) {
        return {std::numeric_limits<double>::infinity(), pairs};
    }
    // The pair count cancels between the two means.
    return {diff_sum / truth_sum, pairs};
}

struct EfficiencyReport {
    double value = 0.0;
    std::size_t calibrated_points = 0;
    std::size_t total_points = 0;
};

/// Fraction of raw points covered by calibrated segments.
inline EfficiencyReport efficiency(const CalibrationPlan& plan, const Dataset& ds) {
    EfficiencyReport r;
    r.total_points = ds.total_points();
    for (const auto& e : plan.entries) {
        if (!ds.find(e.id)) {
            throw UsageError("calibration plan refers to unknown trajectory '" + e.id + "'");
        }
        r.calibrated_points += e.calibrated_points;
    }
    r.value = r.total_points == 0
                  ? 0.0
                  : static_cast<double>(r.calibrated_points) / static_cast<double>(r.total_points);
    return r;
}

using TimingReport = TimingBreakdown;

// Calibration cost curve -----------------------------------------------------------

struct CostCurveRow {
    std::size_t points_per_trajectory = 0;
    double mean_calibration_ms = 0.0;
    std::size_t trials = 0;
};

inline constexpr std::string_view cost_curve_header = "points_per_trajectory,mean_calibration_ms,trials";

/// The noisy walks timed by calibration_cost_curve(), exposed so their
/// determinism can be checked apart from the timings.
inline std::vector<Trajectory> cost_curve_inputs(std::size_t length, std::size_t trials,
                                                 const AnchorGrid& grid, std::uint64_t seed) {
    Rng rng(seed ^ (0x9E3779B97F4A7C15ull * length));
    const double noise = 0.25 * std::min(grid.cell_width(), grid.cell_height());
    std::vector<Trajectory> walks;
    walks.reserve(trials);
    for (std::size_t k = 0; k < trials; ++k) {
        walks.push_back(add_noise(generate_walk(grid, length, rng), rng, noise));
    }
    return walks;
}

/// Mean wall-clock time of fully calibrating `trials` noisy walks of each length.
inline std::vector<CostCurveRow> calibration_cost_curve(std::span<const std::size_t> lengths,
                                                        std::size_t trials,
                                                        const AnchorGrid& grid,
                                                        const CalibrationParams& params,
                                                        std::uint64_t seed) {
    if (lengths.empty()) throw UsageError("cost curve needs at least one length");
    if (trials == 0) throw UsageError("cost curve needs at least one trial");
    params.validate();

    std::vector<CostCurveRow> rows;
    for (const auto length : lengths) {
        if (length < 2) throw UsageError("cost curve lengths must be at least 2");
        const auto walks = cost_curve_inputs(length, trials, grid, seed);
        // Untimed pass so the first measurement does not pay for cold caches.
        (void)calibrate(walks.front(), grid, params);
        double total_ms = 0.0;
        for (const auto& w : walks) {
            const Stopwatch sw;
            const auto calibrated = calibrate(w, grid, params);
            total_ms += sw.elapsed_ms();
            if (calibrated.trajectory.size() == 0) {
                throw InvariantError("calibration produced an empty trajectory");
            }
        }
        rows.push_back({length, total_ms / static_cast<double>(trials), trials});
    }
    return rows;
}

inline void write_cost_curve_csv(std::ostream& out, std::span<const CostCurveRow> rows) {
    out << cost_curve_header << '\n';
    for (const auto& r : rows) {
        out << r.points_per_trajectory << ',' << csv::format_double(r.mean_calibration_ms) << ','
            << r.trials << '\n';
    }
}

inline std::vector<CostCurveRow> read_cost_curve_csv(std::istream& in) {
    std::vector<CostCurveRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = csv::trim(raw);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != cost_curve_header) throw ParseError("unexpected cost-curve header", line_no);
            continue;
        }
        const auto f = csv::split(line);
        if (f.size() != 3) throw ParseError("expected 3 fields", line_no);
        const auto pts = csv::parse_integer(f[0], "points_per_trajectory", line_no);
        const auto trials = csv::parse_integer(f[2], "trials", line_no);
        if (pts < 0 || trials < 0) throw ParseError("negative count", line_no);
        rows.push_back({static_cast<std::size_t>(pts),
                        csv::parse_double(f[1], "mean_calibration_ms", line_no),
                        static_cast<std::size_t>(trials)});
    }
    return rows;
}

} // namespace trajedi

#endif // TRAJEDI_EVALUATION_HPP
