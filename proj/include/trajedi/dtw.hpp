#ifndef TRAJEDI_DTW_HPP
#define TRAJEDI_DTW_HPP

#include "trajedi/trajectory.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

/// \file
/// Dynamic time warping over 2-D point sequences.
///
/// M(1,1) = D(1,1)
/// M(i,1) = M(i-1,1) + D(i,1)
/// M(1,j) = M(1,j-1) + D(1,j)
/// M(i,j) = min(M(i-1,j-1), M(i-1,j), M(i,j-1)) + D(i,j)
///
/// with D the Euclidean distance between point i of the first trajectory and
/// point j of the second. The distance is M(n,m).

namespace trajedi {

/// Full cumulative-cost matrix. Rows follow the first trajectory, columns the
/// second. Cell accessors are 1-based.
class DtwMatrix {
public:
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double at(std::size_t i, std::size_t j) const noexcept {
        return cells_[(i - 1) * cols_ + (j - 1)];
    }

    double distance() const noexcept { return cells_.back(); }

    /// Number of recurrence evaluations performed while filling the matrix.
    std::size_t cells_evaluated() const noexcept { return evaluations_; }

private:
    friend DtwMatrix compute_matrix(const Trajectory& a, const Trajectory& b);

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> cells_;
    std::size_t evaluations_ = 0;
};

inline DtwMatrix compute_matrix(const Trajectory& a, const Trajectory& b) {
    const auto n = a.size();
    const auto m = b.size();

    DtwMatrix M;
    M.rows_ = n;
    M.cols_ = m;
    M.cells_.resize(n * m);
    double* c = M.cells_.data();
    std::size_t evaluations = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = a[i];
        double* row = c + i * m;
        const double* up = i > 0 ? row - m : nullptr;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = euclidean_distance(p, b[j]);
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else if (i == 0) {
                best = row[j - 1];
            } else if (j == 0) {
                best = up[j];
            } else {
                best = std::min({up[j - 1], up[j], row[j - 1]});
            }
            row[j] = best + d;
            ++evaluations;
        }
    }
    M.evaluations_ = evaluations;
    return M;
}

/// DTW distance using two rolling rows. Bit-identical to compute_matrix(a, b).distance().
inline double dtw_distance(const Trajectory& a, const Trajectory& b) {
    const auto n = a.size();
    const auto m = b.size();
    std::vector<double> prev(m), cur(m);

    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        acc += euclidean_distance(a[0], b[j]);
        prev[j] = acc;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const Point& p = a[i];
        cur[0] = prev[0] + euclidean_distance(p, b[0]);
        for (std::size_t j = 1; j < m; ++j) {
            const double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
            cur[j] = best + euclidean_distance(p, b[j]);
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

} // namespace trajedi

#endif // TRAJEDI_DTW_HPP
