#ifndef TRAJEDI_CSV_HPP
#define TRAJEDI_CSV_HPP

#include "trajedi/errors.hpp"
#include "trajedi/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

/// \file
/// Trajectory CSV: `traj_id,seq,x,y[,ts]`, one row per point.
///
/// The header line is written always and is optional on read. Numbers are
/// written in shortest round-trip form, so save followed by load reproduces
/// every coordinate bit for bit. The `ts` column is accepted and ignored.

namespace trajedi {
namespace csv {

inline constexpr std::string_view trajectory_header = "traj_id,seq,x,y";

/// Shortest decimal form that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double(std::string_view field, std::string_view what, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(std::string(what) + " is not a number: '" + std::string(field) + "'", line);
    }
    if (!std::isfinite(v)) {
        throw ParseError(std::string(what) + " is not finite: '" + std::string(field) + "'", line);
    }
    return v;
}

inline long long parse_integer(std::string_view field, std::string_view what, std::size_t line) {
    field = trim(field);
    long long v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(std::string(what) + " is not an integer: '" + std::string(field) + "'", line);
    }
    return v;
}

inline Dataset read_trajectories(std::istream& in) {
    // Per id: seq -> point. Ids keep their first-appearance order.
    std::vector<std::string> order;
    std::map<std::string, std::map<long long, Point>> rows;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line_no == 1 && (line == trajectory_header || line == "traj_id,seq,x,y,ts")) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != 4 && fields.size() != 5) {
            throw ParseError("expected 4 or 5 fields, got " + std::to_string(fields.size()), line_no);
        }
        const std::string id(trim(fields[0]));
        if (id.empty()) {
            throw ParseError("empty traj_id", line_no);
        }
        const auto seq = parse_integer(fields[1], "seq", line_no);
        if (seq < 0) {
            throw ParseError("seq must be non-negative", line_no);
        }
        const Point p{parse_double(fields[2], "x", line_no), parse_double(fields[3], "y", line_no)};

        auto [it, fresh] = rows.try_emplace(id);
        if (fresh) {
            order.push_back(id);
        }
        if (!it->second.emplace(seq, p).second) {
            throw ParseError("duplicate (traj_id, seq) = (" + id + ", " + std::to_string(seq) + ")",
                             line_no);
        }
    }

    Dataset ds;
    for (const auto& id : order) {
        std::vector<Point> pts;
        const auto& by_seq = rows.at(id);
        pts.reserve(by_seq.size());
        for (const auto& [seq, p] : by_seq) {
            pts.push_back(p);
        }
        ds.add(Trajectory(id, std::move(pts)));
    }
    return ds;
}

inline void write_trajectories(std::ostream& out, const Dataset& ds) {
    out << trajectory_header << '\n';
    for (const auto& t : ds) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            out << t.id() << ',' << i << ',' << format_double(t[i].x) << ','
                << format_double(t[i].y) << '\n';
        }
    }
}

} // namespace csv

inline Dataset load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0);
    }
    try {
        return csv::read_trajectories(in);
    } catch (const ParseError& e) {
        throw ParseError(path, e);
    }
}

inline void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write '" + path + "'", 0);
    }
    csv::write_trajectories(out, ds);
}

} // namespace trajedi

#endif // TRAJEDI_CSV_HPP
