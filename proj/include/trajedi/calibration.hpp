#ifndef TRAJEDI_CALIBRATION_HPP
#define TRAJEDI_CALIBRATION_HPP

#include "trajedi/errors.hpp"
#include "trajedi/grid.hpp"
#include "trajedi/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <vector>

/// \file
/// Grid-based trajectory calibration: an alignment phase that snaps raw points
/// to anchors, followed by a complement phase that fills in anchors between
/// consecutive aligned anchors while the moving direction is kept.

namespace trajedi {

struct CalibrationParams {
    /// Points farther than this from every anchor are dropped.
    double align_threshold = 0.0;
    /// Anchors within this distance of the segment between two aligned
    /// anchors are interpolation candidates.
    double complement_threshold = 0.0;

    /// align_threshold = half the cell diagonal, so every point inside the
    /// extent snaps to some anchor. complement_threshold = half the shorter
    /// cell side, which keeps chains of neighbouring anchors unchanged.
    static CalibrationParams defaults_for(const AnchorGrid& grid) {
        return {0.5 * grid.cell_diagonal(),
                0.5 * std::min(grid.cell_width(), grid.cell_height())};
    }

    void validate() const {
        if (!(align_threshold > 0.0) || !std::isfinite(align_threshold)) {
            throw UsageError("align_threshold must be positive");
        }
        if (!(complement_threshold > 0.0) || !std::isfinite(complement_threshold)) {
            throw UsageError("complement_threshold must be positive");
        }
    }
};

/// Sequence of anchor cells.
using AnchorPath = std::vector<Cell>;

/// Snap each point to its nearest anchor. Points beyond `align_threshold` are
/// removed and runs of the same anchor collapse to one entry. May be empty.
inline AnchorPath align(std::span<const Point> points, const AnchorGrid& grid,
                        double align_threshold) {
    AnchorPath out;
    out.reserve(points.size());
    for (const auto& p : points) {
        const auto hit = nearest_anchor(grid, p);
        if (hit.distance > align_threshold) {
            continue;
        }
        if (out.empty() || out.back() != hit.cell) {
            out.push_back(hit.cell);
        }
    }
    return out;
}

inline AnchorPath align(const Trajectory& t, const AnchorGrid& grid, double align_threshold) {
    return align(t.points(), grid, align_threshold);
}

namespace detail {

inline double dot(const Point& u, const Point& v) noexcept { return u.x * v.x + u.y * v.y; }

inline Point minus(const Point& a, const Point& b) noexcept { return {a.x - b.x, a.y - b.y}; }

/// Perpendicular distance from p to segment [a, b], or infinity when the foot
/// of the perpendicular falls outside the segment. Requires a != b.
inline double perpendicular_distance(const Point& p, const Point& a, const Point& b) noexcept {
    const Point ab = minus(b, a);
    const Point ap = minus(p, a);
    const double t = dot(ap, ab) / dot(ab, ab);
    if (t < 0.0 || t > 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return euclidean_distance(p, {a.x + t * ab.x, a.y + t * ab.y});
}

/// Appends the accepted interpolation anchors strictly between a1 and a2.
inline void complement_pair(const Cell& a1, const Cell& a2, const AnchorGrid& grid,
                            double threshold, AnchorPath& out) {
    const Point p1 = grid.anchor(a1);
    const Point p2 = grid.anchor(a2);
    if (p1 == p2) {
        throw InvariantError("complement: consecutive aligned anchors coincide");
    }
    const Point direction = minus(p2, p1);

    const auto [c0, c1] = grid.col_span(std::min(p1.x, p2.x) - threshold,
                                        std::max(p1.x, p2.x) + threshold);
    const auto [r0, r1] = grid.row_span(std::min(p1.y, p2.y) - threshold,
                                        std::max(p1.y, p2.y) + threshold);

    struct Candidate {
        double dist_sq;
        Cell cell;
        Point anchor;
    };
    std::vector<Candidate> candidates;
    for (auto r = r0; r <= r1; ++r) {
        for (auto c = c0; c <= c1; ++c) {
            const Cell cell{r, c};
            if (cell == a1 || cell == a2) {
                continue;
            }
            const Point a = grid.anchor(cell);
            if (perpendicular_distance(a, p1, p2) <= threshold) {
                const Point d = minus(a, p1);
                candidates.push_back({dot(d, d), cell, a});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
        return std::tie(l.dist_sq, l.cell) < std::tie(r.dist_sq, r.cell);
    });

    // Angle with the segment below pi/2 <=> positive dot product.
    Point prev = p1;
    for (const auto& cand : candidates) {
        if (dot(minus(cand.anchor, prev), direction) > 0.0) {
            out.push_back(cand.cell);
            prev = cand.anchor;
        }
    }
}

} // namespace detail

/// Interpolate anchors between consecutive entries of an aligned path.
inline AnchorPath complement(const AnchorPath& aligned, const AnchorGrid& grid,
                             double complement_threshold) {
    if (aligned.size() < 2) {
        return aligned;
    }
    AnchorPath out;
    out.reserve(aligned.size() * 2);
    for (std::size_t k = 0; k + 1 < aligned.size(); ++k) {
        out.push_back(aligned[k]);
        detail::complement_pair(aligned[k], aligned[k + 1], grid, complement_threshold, out);
    }
    out.push_back(aligned.back());
    return out;
}

inline std::vector<Point> to_points(const AnchorPath& path, const AnchorGrid& grid) {
    std::vector<Point> pts;
    pts.reserve(path.size());
    for (const auto& c : path) {
        pts.push_back(grid.anchor(c));
    }
    return pts;
}

struct CalibrationResult {
    Trajectory trajectory;
    /// No point was within align_threshold of an anchor; `trajectory` is the input.
    bool uncalibratable = false;
};

inline CalibrationResult calibrate(const Trajectory& t, const AnchorGrid& grid,
                                   const CalibrationParams& params) {
    const auto aligned = align(t, grid, params.align_threshold);
    if (aligned.empty()) {
        return {t, true};
    }
    const auto filled = complement(aligned, grid, params.complement_threshold);
    return {Trajectory(t.id(), to_points(filled, grid)), false};
}

} // namespace trajedi

#endif // TRAJEDI_CALIBRATION_HPP
