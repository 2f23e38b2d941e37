#ifndef TRAJEDI_SCHEME_HPP
#define TRAJEDI_SCHEME_HPP

#include "trajedi/calibration.hpp"
#include "trajedi/distance_matrix.hpp"
#include "trajedi/dtw.hpp"
#include "trajedi/errors.hpp"
#include "trajedi/grid.hpp"
#include "trajedi/parallel.hpp"
#include "trajedi/rng.hpp"
#include "trajedi/trajectory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

/// \file
/// Calibration-aware pairwise distances.
///
/// Instead of calibrating every trajectory up front, each trajectory is paired
/// with one partner. A fixed-size window slides along the diagonal of their
/// DTW matrix, the window whose corner-to-corner cost growth is largest picks
/// the segment of the trajectory that dominates the distance, and only that
/// segment is calibrated. Every trajectory is calibrated in exactly one such
/// calculation. Distances are then recomputed over the partially calibrated
/// trajectories.

namespace trajedi {

/// Fraction of the DTW matrix covered by a window, strictly inside (0, 1).
class Alpha {
public:
    explicit Alpha(double value) : value_(value) {
        if (!(value > 0.0 && value < 1.0)) {
            throw UsageError("alpha must lie strictly between 0 and 1, got " + std::to_string(value));
        }
    }

    double value() const noexcept { return value_; }

    friend bool operator==(const Alpha&, const Alpha&) = default;

private:
    double value_;
};

/// Rectangle of DTW matrix cells, 1-based and inclusive.
struct Window {
    std::size_t i1 = 1;
    std::size_t j1 = 1;
    std::size_t i2 = 1;
    std::size_t j2 = 1;

    std::size_t height() const noexcept { return i2 - i1 + 1; }
    std::size_t width() const noexcept { return j2 - j1 + 1; }

    friend bool operator==(const Window&, const Window&) = default;
};

inline std::ostream& operator<<(std::ostream& o, const Window& w) {
    return o << "(" << w.i1 << "," << w.j1 << ")-(" << w.i2 << "," << w.j2 << ")";
}

/// max(1, ceil(alpha * extent))
inline std::size_t window_extent(std::size_t extent, Alpha alpha) {
    const auto e = static_cast<std::size_t>(std::ceil(alpha.value() * static_cast<double>(extent)));
    return std::clamp<std::size_t>(e, 1, extent);
}

/// Windows of one fixed size sliding down the diagonal of an n x m matrix.
/// Window t starts at row 1 + t and column 1 + round(t * m / n).
inline std::vector<Window> enumerate_windows(std::size_t n, std::size_t m, Alpha alpha) {
    if (n == 0 || m == 0) {
        throw UsageError("enumerate_windows: matrix must be non-empty");
    }
    const auto h = window_extent(n, alpha);
    const auto w = window_extent(m, alpha);
    std::vector<Window> out;
    for (std::size_t t = 0;; ++t) {
        const std::size_t i1 = 1 + t;
        const std::size_t j1 = 1 + (2 * t * m + n) / (2 * n); // round half up
        const std::size_t i2 = i1 + h - 1;
        const std::size_t j2 = j1 + w - 1;
        if (i2 > n || j2 > m) {
            break;
        }
        out.push_back({i1, j1, i2, j2});
    }
    return out;
}

/// Growth of the cumulative cost between the window's diagonal corners.
inline double score_window(const DtwMatrix& M, const Window& w) {
    return M.at(w.i2, w.j2) - M.at(w.i1, w.j1);
}

/// Highest-scoring window; the earliest one wins ties.
inline Window select_window(const DtwMatrix& M, Alpha alpha) {
    const auto windows = enumerate_windows(M.rows(), M.cols(), alpha);
    std::size_t best = 0;
    double best_score = score_window(M, windows[0]);
    for (std::size_t k = 1; k < windows.size(); ++k) {
        const double s = score_window(M, windows[k]);
        if (s > best_score) {
            best_score = s;
            best = k;
        }
    }
    return windows[best];
}

// Partner selection -----------------------------------------------------------

struct RandomPartner {
    std::uint64_t seed = 0;
    friend bool operator==(const RandomPartner&, const RandomPartner&) = default;
};
struct FurthestPartner {
    friend bool operator==(const FurthestPartner&, const FurthestPartner&) = default;
};
struct ShortestPartner {
    friend bool operator==(const ShortestPartner&, const ShortestPartner&) = default;
};

using PartnerStrategy = std::variant<RandomPartner, FurthestPartner, ShortestPartner>;

inline std::string_view strategy_name(const PartnerStrategy& s) {
    switch (s.index()) {
    case 0: return "random";
    case 1: return "furthest";
    default: return "shortest";
    }
}

/// `random` (seeded with `seed`), `furthest` or `shortest`.
inline PartnerStrategy parse_strategy(std::string_view name, std::uint64_t seed = 0) {
    if (name == "random") return RandomPartner{seed};
    if (name == "furthest") return FurthestPartner{};
    if (name == "shortest") return ShortestPartner{};
    throw UsageError("unknown partner strategy '" + std::string(name) +
                     "' (expected random, furthest or shortest)");
}

inline bool needs_raw_distances(const PartnerStrategy& s) {
    return !std::holds_alternative<RandomPartner>(s);
}

/// Partner index for every trajectory of `ds`, never itself.
///
/// Random draws uniformly among the others. Furthest and Shortest take the
/// row-wise argmax / argmin of `raw` (off-diagonal), ties to the smaller index.
inline std::vector<std::size_t> assign_partners(const Dataset& ds, const PartnerStrategy& strategy,
                                                const DistanceMatrix* raw = nullptr) {
    const auto n = ds.size();
    if (n < 2) {
        throw UsageError("partner assignment needs at least two trajectories");
    }
    std::vector<std::size_t> partner(n);

    if (const auto* r = std::get_if<RandomPartner>(&strategy)) {
        Rng rng(r->seed);
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = rng.uniform_index(n - 1);
            partner[i] = k < i ? k : k + 1;
        }
        return partner;
    }

    if (raw == nullptr || raw->size() != n) {
        throw UsageError(std::string(strategy_name(strategy)) +
                         " partner selection requires the raw pairwise distance matrix");
    }
    const bool furthest = std::holds_alternative<FurthestPartner>(strategy);
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<std::size_t> best;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double v = (*raw)(i, j);
            if (!best || (furthest ? v > (*raw)(i, *best) : v < (*raw)(i, *best))) {
                best = j;
            }
        }
        partner[i] = *best;
    }
    return partner;
}

// Calibration plan --------------------------------------------------------------

/// What was calibrated for one trajectory.
struct PlanEntry {
    std::string id;
    /// Absent for full calibration.
    std::optional<std::string> partner;
    std::optional<Window> window;
    /// Raw point range that was replaced (1-based, inclusive).
    SegmentRange segment;
    std::vector<Point> replacement;
    /// Raw points covered by the calibrated segment; 0 when it was uncalibratable.
    std::size_t calibrated_points = 0;
    bool uncalibratable = false;
};

struct CalibrationPlan {
    std::vector<PlanEntry> entries;

    const PlanEntry* find(const std::string& id) const {
        for (const auto& e : entries) {
            if (e.id == id) return &e;
        }
        return nullptr;
    }
};

struct PartialCalibration {
    Trajectory trajectory;
    PlanEntry entry;
};

/// Calibrates the segment of `t` that dominates its DTW distance to `partner`.
/// `t` runs along the matrix rows, so window rows map straight to its points.
/// The partner is only a reference and is left untouched.
inline PartialCalibration calibrate_with_partner(const Trajectory& t, const Trajectory& partner,
                                                 Alpha alpha, const AnchorGrid& grid,
                                                 const CalibrationParams& params) {
    const auto M = compute_matrix(t, partner);
    const auto window = select_window(M, alpha);

    PlanEntry entry;
    entry.id = t.id();
    entry.partner = partner.id();
    entry.window = window;
    entry.segment = {window.i1, window.i2};

    const auto segment = slice(t, window.i1, window.i2);
    auto calibrated = calibrate(segment, grid, params);
    if (calibrated.uncalibratable) {
        entry.uncalibratable = true;
        entry.calibrated_points = 0;
        return {t, std::move(entry)};
    }

    const auto replacement = calibrated.trajectory.points();
    entry.replacement.assign(replacement.begin(), replacement.end());
    auto spliced = splice(t, window.i1, window.i2, replacement);
    entry.calibrated_points = window.height();
    return {std::move(spliced.trajectory), std::move(entry)};
}

// Pairwise matrix ------------------------------------------------------------

enum class Mode { none, full, trajedi };

inline std::string_view mode_name(Mode m) {
    switch (m) {
    case Mode::none: return "none";
    case Mode::full: return "full";
    default: return "trajedi";
    }
}

inline Mode parse_mode(std::string_view name) {
    if (name == "none") return Mode::none;
    if (name == "full") return Mode::full;
    if (name == "trajedi") return Mode::trajedi;
    throw UsageError("unknown mode '" + std::string(name) + "' (expected none, full or trajedi)");
}

/// Wall-clock milliseconds. I/O is never inside a measured region.
struct TimingBreakdown {
    double partner_selection_ms = 0.0;
    double calibration_ms = 0.0;
    double dtw_ms = 0.0;
    double total_ms = 0.0;
};

class Stopwatch {
public:
    Stopwatch() : start_(clock::now()) {}

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

struct PairwiseOptions {
    Mode mode = Mode::none;
    std::optional<Alpha> alpha;
    std::optional<PartnerStrategy> strategy;
    std::size_t threads = 1;
    /// Precomputed raw all-pairs DTW for furthest/shortest. Computed (and
    /// timed as partner selection) when absent.
    const DistanceMatrix* raw_distances = nullptr;
};

struct PairwiseResult {
    DistanceMatrix distances;
    CalibrationPlan plan;
    TimingBreakdown timing;
    /// calibrate_with_partner invocations; equals the dataset size in trajedi mode.
    std::size_t partner_calibrations = 0;
};

inline PairwiseResult pairwise_distance_matrix(const Dataset& ds, const PairwiseOptions& opts,
                                               const AnchorGrid& grid,
                                               const CalibrationParams& params) {
    params.validate();
    const Stopwatch total;
    PairwiseResult result;
    const auto n = ds.size();

    std::vector<Trajectory> working(ds.begin(), ds.end());

    switch (opts.mode) {
    case Mode::none:
        break;

    case Mode::full: {
        const Stopwatch sw;
        std::vector<std::optional<CalibrationResult>> calibrated(n);
        parallel_for(n, opts.threads, [&](std::size_t k) {
            calibrated[k] = calibrate(ds[k], grid, params);
        });
        for (std::size_t k = 0; k < n; ++k) {
            PlanEntry e;
            e.id = ds[k].id();
            e.segment = {1, ds[k].size()};
            e.uncalibratable = calibrated[k]->uncalibratable;
            e.calibrated_points = e.uncalibratable ? 0 : ds[k].size();
            const auto pts = calibrated[k]->trajectory.points();
            e.replacement.assign(pts.begin(), pts.end());
            working[k] = std::move(calibrated[k]->trajectory);
            result.plan.entries.push_back(std::move(e));
        }
        result.timing.calibration_ms = sw.elapsed_ms();
        break;
    }

    case Mode::trajedi: {
        if (!opts.alpha || !opts.strategy) {
            throw UsageError("trajedi mode needs both alpha and a partner strategy");
        }
        const Stopwatch selection;
        std::optional<DistanceMatrix> own_raw;
        const DistanceMatrix* raw = opts.raw_distances;
        if (needs_raw_distances(*opts.strategy) && raw == nullptr) {
            own_raw = all_pairs_dtw(ds, opts.threads);
            raw = &*own_raw;
        }
        const auto partners = assign_partners(ds, *opts.strategy, raw);
        result.timing.partner_selection_ms = selection.elapsed_ms();

        // Each trajectory is modified only in its own designated calculation,
        // always against its raw partner.
        const Stopwatch sw;
        std::vector<std::optional<PartialCalibration>> partial(n);
        parallel_for(n, opts.threads, [&](std::size_t k) {
            partial[k] = calibrate_with_partner(ds[k], ds[partners[k]], *opts.alpha, grid, params);
        });
        for (std::size_t k = 0; k < n; ++k) {
            working[k] = std::move(partial[k]->trajectory);
            result.plan.entries.push_back(std::move(partial[k]->entry));
        }
        result.partner_calibrations = n;
        result.timing.calibration_ms = sw.elapsed_ms();
        break;
    }
    }

    const Stopwatch sw;
    result.distances = all_pairs_dtw(working, opts.threads);
    result.timing.dtw_ms = sw.elapsed_ms();
    result.timing.total_ms = total.elapsed_ms();
    return result;
}

} // namespace trajedi

#endif // TRAJEDI_SCHEME_HPP
