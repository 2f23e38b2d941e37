#ifndef TRAJEDI_TRAJECTORY_HPP
#define TRAJEDI_TRAJECTORY_HPP

#include "trajedi/errors.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

/// \file
/// Points, trajectories and datasets.
///
/// Index arguments of slice() and splice() are 1-based and inclusive so that
/// they line up with DTW matrix rows.

namespace trajedi {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline std::ostream& operator<<(std::ostream& o, const Point& p) {
    return o << "(" << p.x << ", " << p.y << ")";
}

inline bool is_finite(const Point& p) noexcept {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

inline double euclidean_distance(const Point& p, const Point& q) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Inclusive 1-based point range of a parent trajectory.
struct SegmentRange {
    std::size_t lo = 1;
    std::size_t hi = 1;

    std::size_t size() const noexcept { return hi - lo + 1; }

    friend bool operator==(const SegmentRange&, const SegmentRange&) = default;
};

/// A non-empty, ordered sequence of finite points with an identifier.
class Trajectory {
public:
    Trajectory(std::string id, std::vector<Point> points,
               std::optional<SegmentRange> segment = std::nullopt)
        : id_(std::move(id))
        , points_(std::move(points))
        , segment_(segment)
    {
        if (points_.empty()) {
            throw UsageError("trajectory '" + id_ + "' has no points");
        }
        for (const auto& p : points_) {
            if (!is_finite(p)) {
                throw UsageError("trajectory '" + id_ + "' has a non-finite coordinate");
            }
        }
    }

    const std::string& id() const noexcept { return id_; }
    std::span<const Point> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    /// 0-based element access.
    const Point& operator[](std::size_t i) const noexcept { return points_[i]; }

    /// Set when this trajectory was cut out of another one by slice().
    const std::optional<SegmentRange>& segment() const noexcept { return segment_; }

    friend bool operator==(const Trajectory& a, const Trajectory& b) {
        return a.id_ == b.id_ && a.points_ == b.points_;
    }

private:
    std::string id_;
    std::vector<Point> points_;
    std::optional<SegmentRange> segment_;
};

namespace detail {

inline void check_range(const Trajectory& t, std::size_t lo, std::size_t hi) {
    if (lo < 1 || lo > hi || hi > t.size()) {
        throw UsageError("range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] is outside trajectory '" + t.id() + "' of length " +
                         std::to_string(t.size()));
    }
}

} // namespace detail

/// Points lo..hi (1-based, inclusive). The result keeps the id and records the range.
inline Trajectory slice(const Trajectory& t, std::size_t lo, std::size_t hi) {
    detail::check_range(t, lo, hi);
    const auto pts = t.points();
    return Trajectory(t.id(), std::vector<Point>(pts.begin() + (lo - 1), pts.begin() + hi),
                      SegmentRange{lo, hi});
}

struct SpliceResult {
    Trajectory trajectory;
    /// True when the replacement would have emptied the trajectory; the
    /// original points were kept instead.
    bool degenerate = false;
};

/// Replace points lo..hi (1-based, inclusive) with `replacement`.
inline SpliceResult splice(const Trajectory& t, std::size_t lo, std::size_t hi,
                           std::span<const Point> replacement) {
    detail::check_range(t, lo, hi);
    const auto pts = t.points();
    if (replacement.empty() && lo == 1 && hi == t.size()) {
        return {t, true};
    }
    std::vector<Point> out;
    out.reserve(t.size() - (hi - lo + 1) + replacement.size());
    out.insert(out.end(), pts.begin(), pts.begin() + (lo - 1));
    out.insert(out.end(), replacement.begin(), replacement.end());
    out.insert(out.end(), pts.begin() + hi, pts.end());
    return {Trajectory(t.id(), std::move(out)), false};
}

/// Ordered collection of trajectories with unique ids.
class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<Trajectory> trajectories) {
        trajectories_.reserve(trajectories.size());
        for (auto& t : trajectories) {
            add(std::move(t));
        }
    }

    void add(Trajectory t) {
        const auto [it, inserted] = index_.emplace(t.id(), trajectories_.size());
        if (!inserted) {
            throw UsageError("duplicate trajectory id '" + t.id() + "'");
        }
        trajectories_.push_back(std::move(t));
    }

    std::size_t size() const noexcept { return trajectories_.size(); }
    bool empty() const noexcept { return trajectories_.empty(); }

    const Trajectory& operator[](std::size_t i) const noexcept { return trajectories_[i]; }
    std::span<const Trajectory> trajectories() const noexcept { return trajectories_; }

    auto begin() const noexcept { return trajectories_.begin(); }
    auto end() const noexcept { return trajectories_.end(); }

    std::optional<std::size_t> find(const std::string& id) const {
        const auto it = index_.find(id);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    const Trajectory& at(const std::string& id) const {
        const auto i = find(id);
        if (!i) {
            throw UsageError("unknown trajectory id '" + id + "'");
        }
        return trajectories_[*i];
    }

    std::size_t total_points() const noexcept {
        std::size_t n = 0;
        for (const auto& t : trajectories_) {
            n += t.size();
        }
        return n;
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.trajectories_ == b.trajectories_;
    }

private:
    std::vector<Trajectory> trajectories_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Reorders `companion` to follow the id order of `reference`. Throws
/// UsageError unless both hold exactly the same id set.
inline Dataset match_ids(const Dataset& reference, const Dataset& companion) {
    if (reference.size() != companion.size()) {
        throw UsageError("datasets differ in size: " + std::to_string(reference.size()) +
                         " vs " + std::to_string(companion.size()));
    }
    Dataset out;
    for (const auto& t : reference) {
        const auto j = companion.find(t.id());
        if (!j) {
            throw UsageError("trajectory '" + t.id() + "' missing from companion dataset");
        }
        out.add(companion[*j]);
    }
    return out;
}

} // namespace trajedi

#endif // TRAJEDI_TRAJECTORY_HPP
