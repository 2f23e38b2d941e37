#ifndef TRAJEDI_SYNTHETIC_HPP
#define TRAJEDI_SYNTHETIC_HPP

#include "trajedi/errors.hpp"
#include "trajedi/grid.hpp"
#include "trajedi/rng.hpp"
#include "trajedi/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

/// \file
/// Synthetic evaluation data: random walks over grid anchors, degraded by
/// Gaussian-sized downsampling and Gaussian point noise.
///
/// All draws come from one Rng in a fixed order: every walk first, then the
/// downsampling of each trajectory, then the noise of each trajectory.

namespace trajedi {

struct GeneratorConfig {
    std::size_t grid_n = 1000;
    std::size_t num_trajectories = 50;
    std::size_t initial_length = 1500;
    double keep_mean = 800.0;
    double keep_sd = 200.0;
    /// Defaults to a quarter of the cell width.
    std::optional<double> noise_sd;
    std::uint64_t seed = 0;

    /// The walk grid: grid_n unit cells per side over [0, grid_n]^2.
    AnchorGrid grid() const {
        const auto side = static_cast<double>(grid_n);
        return AnchorGrid(Extent{0.0, 0.0, side, side}, grid_n);
    }

    double effective_noise_sd() const {
        return noise_sd ? *noise_sd : 0.25 * grid().cell_width();
    }

    void validate() const {
        if (grid_n < 2) throw UsageError("grid_n must be at least 2 for a random walk");
        if (num_trajectories < 1) throw UsageError("num_trajectories must be positive");
        if (initial_length < 2) throw UsageError("initial_length must be at least 2");
        if (!(keep_mean > 0.0)) throw UsageError("keep_mean must be positive");
        if (!(keep_sd >= 0.0)) throw UsageError("keep_sd must be non-negative");
        if (noise_sd && !(*noise_sd >= 0.0)) throw UsageError("noise_sd must be non-negative");
    }
};

struct GeneratedDataset {
    Dataset truth;
    Dataset degraded;
};

namespace detail {

struct Step {
    std::int64_t dr;
    std::int64_t dc;
};

inline constexpr std::array<Step, 8> king_moves{{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
}};

} // namespace detail

/// Random walk of `length` anchors. Starts at a uniform anchor and moves to one
/// of the eight neighbouring cells each step. After the first step only
/// directions within 90 degrees (exclusive) of the previous one are allowed;
/// when the border leaves none, any in-grid direction is allowed for that step.
inline Trajectory generate_walk(const AnchorGrid& grid, std::size_t length, Rng& rng,
                                std::string id = "walk") {
    if (grid.cells_per_side() < 2) {
        throw UsageError("random walk needs a grid with at least 2 cells per side");
    }
    if (length < 1) {
        throw UsageError("walk length must be positive");
    }
    const auto n = grid.cells_per_side();
    Cell at{static_cast<std::int64_t>(rng.uniform_index(n)),
            static_cast<std::int64_t>(rng.uniform_index(n))};

    std::vector<Point> pts;
    pts.reserve(length);
    pts.push_back(grid.anchor(at));

    std::optional<detail::Step> previous;
    std::vector<detail::Step> allowed;
    std::vector<detail::Step> inside;
    while (pts.size() < length) {
        allowed.clear();
        inside.clear();
        for (const auto& s : detail::king_moves) {
            if (!grid.contains({at.row + s.dr, at.col + s.dc})) {
                continue;
            }
            inside.push_back(s);
            if (!previous || s.dr * previous->dr + s.dc * previous->dc > 0) {
                allowed.push_back(s);
            }
        }
        const auto& pool = allowed.empty() ? inside : allowed;
        const auto s = pool[rng.uniform_index(pool.size())];
        at = {at.row + s.dr, at.col + s.dc};
        previous = s;
        pts.push_back(grid.anchor(at));
    }
    return Trajectory(std::move(id), std::move(pts));
}

/// Keeps round(N(keep_mean, keep_sd)) points, clamped to [2, length]. The
/// endpoints always survive; the rest are drawn uniformly from the interior.
inline Trajectory downsample(const Trajectory& t, Rng& rng, double keep_mean, double keep_sd) {
    const auto len = t.size();
    if (len < 2) {
        throw UsageError("downsample needs at least two points");
    }
    const double draw = rng.normal(keep_mean, keep_sd);
    const double clamped = std::clamp(std::round(draw), 2.0, static_cast<double>(len));
    const auto keep = static_cast<std::size_t>(clamped);
    if (keep == len) {
        return t;
    }

    // Partial Fisher-Yates over interior indices 1..len-2.
    std::vector<std::size_t> interior(len - 2);
    for (std::size_t k = 0; k < interior.size(); ++k) {
        interior[k] = k + 1;
    }
    const std::size_t picks = keep - 2;
    for (std::size_t s = 0; s < picks; ++s) {
        const auto j = s + rng.uniform_index(interior.size() - s);
        std::swap(interior[s], interior[j]);
    }
    interior.resize(picks);
    std::sort(interior.begin(), interior.end());

    std::vector<Point> pts;
    pts.reserve(keep);
    pts.push_back(t[0]);
    for (const auto i : interior) {
        pts.push_back(t[i]);
    }
    pts.push_back(t[len - 1]);
    return Trajectory(t.id(), std::move(pts));
}

/// Adds independent N(0, noise_sd) to every coordinate.
inline Trajectory add_noise(const Trajectory& t, Rng& rng, double noise_sd) {
    if (!(noise_sd >= 0.0)) {
        throw UsageError("noise_sd must be non-negative");
    }
    if (noise_sd == 0.0) {
        return t;
    }
    std::vector<Point> pts(t.points().begin(), t.points().end());
    for (auto& p : pts) {
        p.x += rng.normal(0.0, noise_sd);
        p.y += rng.normal(0.0, noise_sd);
    }
    return Trajectory(t.id(), std::move(pts));
}

/// "t000", "t001", ... wide enough that lexicographic order is numeric order.
inline std::string trajectory_id(std::size_t index, std::size_t count) {
    std::size_t width = 3;
    for (std::size_t c = count > 0 ? count - 1 : 0; c >= 1000; c /= 10) {
        ++width;
    }
    auto digits = std::to_string(index);
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }
    return "t" + digits;
}

inline GeneratedDataset generate_dataset(const GeneratorConfig& config) {
    config.validate();
    const auto grid = config.grid();
    const double noise = config.effective_noise_sd();
    Rng rng(config.seed);

    std::vector<Trajectory> walks;
    walks.reserve(config.num_trajectories);
    for (std::size_t k = 0; k < config.num_trajectories; ++k) {
        walks.push_back(generate_walk(grid, config.initial_length, rng,
                                      trajectory_id(k, config.num_trajectories)));
    }
    std::vector<Trajectory> thinned;
    thinned.reserve(walks.size());
    for (const auto& w : walks) {
        thinned.push_back(downsample(w, rng, config.keep_mean, config.keep_sd));
    }
    GeneratedDataset out;
    for (const auto& t : thinned) {
        out.degraded.add(add_noise(t, rng, noise));
    }
    out.truth = Dataset(std::move(walks));
    return out;
}

} // namespace trajedi

#endif // TRAJEDI_SYNTHETIC_HPP
