#ifndef TRAJEDI_GRID_HPP
#define TRAJEDI_GRID_HPP

#include "trajedi/errors.hpp"
#include "trajedi/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

namespace trajedi {

/// Axis-aligned bounding box of the data space.
struct Extent {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 1.0;
    double max_y = 1.0;

    double width() const noexcept { return max_x - min_x; }
    double height() const noexcept { return max_y - min_y; }

    friend bool operator==(const Extent&, const Extent&) = default;
};

/// Grid cell index. Ordered by row, then column.
struct Cell {
    std::int64_t row = 0;
    std::int64_t col = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::ostream& operator<<(std::ostream& o, const Cell& c) {
    return o << "[" << c.row << ", " << c.col << "]";
}

/// N x N grid over an extent with one anchor at the center of every cell.
/// Anchors are derived by cell arithmetic and never stored.
class AnchorGrid {
public:
    AnchorGrid(const Extent& extent, std::size_t cells_per_side)
        : extent_(extent)
        , n_(cells_per_side)
    {
        if (n_ == 0) {
            throw UsageError("grid needs at least one cell per side");
        }
        if (!(extent.width() > 0.0) || !(extent.height() > 0.0) || !std::isfinite(extent.width()) ||
            !std::isfinite(extent.height())) {
            throw UsageError("grid extent must have positive, finite width and height");
        }
        cell_width_ = extent.width() / static_cast<double>(n_);
        cell_height_ = extent.height() / static_cast<double>(n_);
    }

    std::size_t cells_per_side() const noexcept { return n_; }
    const Extent& extent() const noexcept { return extent_; }
    double cell_width() const noexcept { return cell_width_; }
    double cell_height() const noexcept { return cell_height_; }

    double cell_diagonal() const noexcept { return std::hypot(cell_width_, cell_height_); }

    bool contains(const Cell& c) const noexcept {
        const auto n = static_cast<std::int64_t>(n_);
        return c.row >= 0 && c.row < n && c.col >= 0 && c.col < n;
    }

    /// Center of cell (row, col).
    Point anchor(const Cell& c) const noexcept {
        return {extent_.min_x + (static_cast<double>(c.col) + 0.5) * cell_width_,
                extent_.min_y + (static_cast<double>(c.row) + 0.5) * cell_height_};
    }

    /// Cell containing p, clamped into the grid.
    Cell clamped_cell(const Point& p) const noexcept {
        return {clamp_index((p.y - extent_.min_y) / cell_height_),
                clamp_index((p.x - extent_.min_x) / cell_width_)};
    }

    /// Column range [lo, hi] (clamped) of cells intersecting x in [x0, x1].
    std::pair<std::int64_t, std::int64_t> col_span(double x0, double x1) const noexcept {
        return {clamp_index((x0 - extent_.min_x) / cell_width_),
                clamp_index((x1 - extent_.min_x) / cell_width_)};
    }

    std::pair<std::int64_t, std::int64_t> row_span(double y0, double y1) const noexcept {
        return {clamp_index((y0 - extent_.min_y) / cell_height_),
                clamp_index((y1 - extent_.min_y) / cell_height_)};
    }

private:
    std::int64_t clamp_index(double v) const noexcept {
        const double hi = static_cast<double>(n_ - 1);
        return static_cast<std::int64_t>(std::clamp(std::floor(v), 0.0, hi));
    }

    Extent extent_;
    std::size_t n_;
    double cell_width_ = 1.0;
    double cell_height_ = 1.0;
};

inline AnchorGrid build_grid(const Extent& extent, std::size_t cells_per_side) {
    return AnchorGrid(extent, cells_per_side);
}

struct NearestAnchor {
    Cell cell;
    Point anchor;
    double distance = 0.0;
};

/// Closest anchor to p. The clamped cell and its eight neighbours always hold
/// the answer. Ties go to the smaller row, then the smaller column.
inline NearestAnchor nearest_anchor(const AnchorGrid& grid, const Point& p) {
    const Cell home = grid.clamped_cell(p);
    NearestAnchor best{home, grid.anchor(home), 0.0};
    double best_sq = -1.0;
    for (std::int64_t dr = -1; dr <= 1; ++dr) {
        for (std::int64_t dc = -1; dc <= 1; ++dc) {
            const Cell c{home.row + dr, home.col + dc};
            if (!grid.contains(c)) {
                continue;
            }
            const Point a = grid.anchor(c);
            const double dx = p.x - a.x;
            const double dy = p.y - a.y;
            const double sq = dx * dx + dy * dy;
            if (best_sq < 0.0 || sq < best_sq) {
                best_sq = sq;
                best.cell = c;
                best.anchor = a;
            }
        }
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

} // namespace trajedi

#endif // TRAJEDI_GRID_HPP
