#ifndef TRAJEDI_DTW_ORACLE_HPP
#define TRAJEDI_DTW_ORACLE_HPP

#include "trajedi/errors.hpp"
#include "trajedi/trajectory.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

/// \file
/// Exhaustive DTW reference. Walks every monotone alignment path explicitly
/// instead of using the dynamic program, so it can check dtw.hpp independently.

namespace trajedi {

/// Largest n*m accepted by the exhaustive routines.
inline constexpr std::size_t brute_force_cell_limit = 64;

/// A path through the n x m lattice as 1-based (i, j) cells.
using AlignmentPath = std::vector<std::pair<std::size_t, std::size_t>>;

/// Calls `visit` once for every path from (1,1) to (n,m) using the steps
/// (i+1, j), (i, j+1) and (i+1, j+1).
inline void enumerate_alignments(std::size_t n, std::size_t m,
                                 const std::function<void(const AlignmentPath&)>& visit) {
    if (n == 0 || m == 0) {
        throw UsageError("alignment lattice must be non-empty");
    }
    if (n * m > brute_force_cell_limit) {
        throw UsageError("brute-force alignment limited to n*m <= 64, got " +
                         std::to_string(n * m));
    }
    AlignmentPath path{{1, 1}};
    std::function<void()> walk = [&] {
        const auto [i, j] = path.back();
        if (i == n && j == m) {
            visit(path);
            return;
        }
        constexpr std::pair<std::size_t, std::size_t> steps[] = {{1, 0}, {0, 1}, {1, 1}};
        for (const auto& [di, dj] : steps) {
            if (i + di <= n && j + dj <= m) {
                path.emplace_back(i + di, j + dj);
                walk();
                path.pop_back();
            }
        }
    };
    walk();
}

/// Minimum summed point distance over all monotone alignments of a and b.
inline double brute_force_dtw(const Trajectory& a, const Trajectory& b) {
    double best = std::numeric_limits<double>::infinity();
    enumerate_alignments(a.size(), b.size(), [&](const AlignmentPath& path) {
        double cost = 0.0;
        for (const auto& [i, j] : path) {
            cost += euclidean_distance(a[i - 1], b[j - 1]);
        }
        if (cost < best) {
            best = cost;
        }
    });
    return best;
}

} // namespace trajedi

#endif // TRAJEDI_DTW_ORACLE_HPP
