#ifndef TRAJEDI_DISTANCE_MATRIX_HPP
#define TRAJEDI_DISTANCE_MATRIX_HPP

#include "trajedi/dtw.hpp"
#include "trajedi/errors.hpp"
#include "trajedi/parallel.hpp"
#include "trajedi/trajectory.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace trajedi {

/// Dense symmetric matrix of pairwise distances with a zero diagonal.
/// Indices are 0-based dataset positions.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t size) : size_(size), values_(size * size, 0.0) {}

    std::size_t size() const noexcept { return size_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * size_ + j]; }

    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double v) noexcept {
        values_[i * size_ + j] = v;
        values_[j * size_ + i] = v;
    }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t size_ = 0;
    std::vector<double> values_;
};

/// DTW between every unordered pair. Pairs are enumerated in a fixed order and
/// each result lands in its own cell, so any thread count gives the same matrix.
inline DistanceMatrix all_pairs_dtw(std::span<const Trajectory> trajectories,
                                    std::size_t threads = 1) {
    const auto n = trajectories.size();
    DistanceMatrix out(n);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        values[k] = dtw_distance(trajectories[pairs[k].first], trajectories[pairs[k].second]);
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        out.set(pairs[k].first, pairs[k].second, values[k]);
    }
    return out;
}

inline DistanceMatrix all_pairs_dtw(const Dataset& ds, std::size_t threads = 1) {
    return all_pairs_dtw(ds.trajectories(), threads);
}

} // namespace trajedi

#endif // TRAJEDI_DISTANCE_MATRIX_HPP
