#ifndef TRAJEDI_EXPERIMENT_HPP
#define TRAJEDI_EXPERIMENT_HPP

#include "trajedi/calibration.hpp"
#include "trajedi/csv.hpp"
#include "trajedi/distance_matrix.hpp"
#include "trajedi/errors.hpp"
#include "trajedi/evaluation.hpp"
#include "trajedi/grid.hpp"
#include "trajedi/scheme.hpp"
#include "trajedi/synthetic.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

/// \file
/// Experiment sweeps driven by a flat `key = value` config file.
///
/// Lines are `key = value`; `#` starts a comment; list values are comma
/// separated. Recognised keys:
///
///   dataset               label written to the results (default: derived)
///   truth, degraded       trajectory CSV paths (both or neither)
///   generate              true to synthesize the datasets instead
///   num_trajectories, initial_length, keep_mean, keep_sd, noise_sd
///                         generator settings (see GeneratorConfig)
///   grid_n                cells per side (default 1000)
///   extent                min_x,min_y,max_x,max_y (default 0,0,grid_n,grid_n)
///   align_threshold       default: half the cell diagonal
///   complement_threshold  default: half the shorter cell side
///   mode                  list of none, full, trajedi (default: all three)
///   alpha                 list of window fractions in (0, 1)
///   strategy              list of random, furthest, shortest (default: all three)
///   seed                  generator and random-partner seed (default 0)
///   threads               worker threads (default 1)
///   output                results CSV path (default results.csv)

namespace trajedi {

/// Config problem, tagged with the offending key and line (0 for overrides).
class ConfigError : public UsageError {
public:
    ConfigError(const std::string& key, std::size_t line, const std::string& what)
        : UsageError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + "'" +
                     key + "': " + what)
        , key_(key)
        , line_(line)
    {}

    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

struct ExperimentConfig {
    std::string dataset_name;
    std::optional<std::string> truth_path;
    std::optional<std::string> degraded_path;
    std::optional<GeneratorConfig> generator;

    std::size_t grid_n = 1000;
    Extent extent{0.0, 0.0, 1000.0, 1000.0};
    std::optional<double> align_threshold;
    std::optional<double> complement_threshold;

    std::vector<Mode> modes{Mode::none, Mode::full, Mode::trajedi};
    std::vector<Alpha> alphas;
    std::vector<std::string> strategies{"random", "furthest", "shortest"};

    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string output = "results.csv";

    AnchorGrid grid() const { return AnchorGrid(extent, grid_n); }

    CalibrationParams params() const {
        auto p = CalibrationParams::defaults_for(grid());
        if (align_threshold) p.align_threshold = *align_threshold;
        if (complement_threshold) p.complement_threshold = *complement_threshold;
        return p;
    }
};

namespace detail {

inline const std::set<std::string, std::less<>>& config_keys() {
    static const std::set<std::string, std::less<>> keys{
        "dataset",   "truth",          "degraded",  "generate",  "num_trajectories",
        "initial_length", "keep_mean", "keep_sd",   "noise_sd",  "grid_n",
        "extent",    "align_threshold", "complement_threshold", "mode", "alpha",
        "strategy",  "seed",           "threads",   "output",
    };
    return keys;
}

struct RawEntry {
    std::string value;
    std::size_t line = 0;
};

inline std::vector<std::string> split_list(std::string_view v) {
    std::vector<std::string> out;
    for (auto item : csv::split(v)) {
        item = csv::trim(item);
        if (!item.empty()) out.emplace_back(item);
    }
    return out;
}

inline double config_double(const std::string& key, const RawEntry& e) {
    try {
        return csv::parse_double(e.value, key, 0);
    } catch (const ParseError&) {
        throw ConfigError(key, e.line, "expected a number, got '" + e.value + "'");
    }
}

inline std::uint64_t config_unsigned(const std::string& key, const RawEntry& e) {
    long long v = 0;
    try {
        v = csv::parse_integer(e.value, key, 0);
    } catch (const ParseError&) {
        throw ConfigError(key, e.line, "expected an integer, got '" + e.value + "'");
    }
    if (v < 0) throw ConfigError(key, e.line, "must be non-negative");
    return static_cast<std::uint64_t>(v);
}

inline bool config_bool(const std::string& key, const RawEntry& e) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(key, e.line, "expected true or false, got '" + e.value + "'");
}

} // namespace detail

/// Parses `key = value` text. `overrides` (e.g. from command-line flags of the
/// same names) replace file values. When `check_files` is set, dataset paths
/// must exist.
inline ExperimentConfig parse_config(std::istream& in,
                                     const std::map<std::string, std::string>& overrides = {},
                                     bool check_files = true) {
    std::map<std::string, detail::RawEntry> raw;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        std::string_view line = text;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = csv::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), line_no, "expected 'key = value'");
        }
        const std::string key(csv::trim(line.substr(0, eq)));
        const std::string value(csv::trim(line.substr(eq + 1)));
        if (!detail::config_keys().contains(key)) {
            throw ConfigError(key, line_no, "unknown key");
        }
        if (raw.contains(key)) {
            throw ConfigError(key, line_no, "key given twice");
        }
        raw[key] = {value, line_no};
    }
    for (const auto& [key, value] : overrides) {
        if (!detail::config_keys().contains(key)) {
            throw ConfigError(key, 0, "unknown key");
        }
        raw[key] = {value, 0};
    }

    ExperimentConfig cfg;
    const auto get = [&](const char* key) -> const detail::RawEntry* {
        const auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };

    if (const auto* e = get("grid_n")) {
        cfg.grid_n = detail::config_unsigned("grid_n", *e);
        if (cfg.grid_n == 0) throw ConfigError("grid_n", e->line, "must be positive");
    }
    const auto side = static_cast<double>(cfg.grid_n);
    cfg.extent = {0.0, 0.0, side, side};
    if (const auto* e = get("extent")) {
        const auto parts = detail::split_list(e->value);
        if (parts.size() != 4) {
            throw ConfigError("extent", e->line, "expected min_x,min_y,max_x,max_y");
        }
        double v[4];
        for (int k = 0; k < 4; ++k) v[k] = detail::config_double("extent", {parts[k], e->line});
        cfg.extent = {v[0], v[1], v[2], v[3]};
        if (!(cfg.extent.width() > 0.0) || !(cfg.extent.height() > 0.0)) {
            throw ConfigError("extent", e->line, "must have positive width and height");
        }
    }
    if (const auto* e = get("align_threshold")) {
        cfg.align_threshold = detail::config_double("align_threshold", *e);
        if (!(*cfg.align_threshold > 0.0)) throw ConfigError("align_threshold", e->line, "must be positive");
    }
    if (const auto* e = get("complement_threshold")) {
        cfg.complement_threshold = detail::config_double("complement_threshold", *e);
        if (!(*cfg.complement_threshold > 0.0)) {
            throw ConfigError("complement_threshold", e->line, "must be positive");
        }
    }
    if (const auto* e = get("seed")) cfg.seed = detail::config_unsigned("seed", *e);
    if (const auto* e = get("threads")) {
        cfg.threads = detail::config_unsigned("threads", *e);
        if (cfg.threads == 0) throw ConfigError("threads", e->line, "must be positive");
    }
    if (const auto* e = get("output")) {
        if (e->value.empty()) throw ConfigError("output", e->line, "must not be empty");
        cfg.output = e->value;
    }

    if (const auto* e = get("mode")) {
        cfg.modes.clear();
        for (const auto& name : detail::split_list(e->value)) {
            try {
                const auto m = parse_mode(name);
                if (std::find(cfg.modes.begin(), cfg.modes.end(), m) == cfg.modes.end()) {
                    cfg.modes.push_back(m);
                }
            } catch (const UsageError& err) {
                throw ConfigError("mode", e->line, err.what());
            }
        }
        if (cfg.modes.empty()) throw ConfigError("mode", e->line, "at least one mode is required");
    }
    if (const auto* e = get("strategy")) {
        cfg.strategies.clear();
        for (const auto& name : detail::split_list(e->value)) {
            try {
                (void)parse_strategy(name);
            } catch (const UsageError& err) {
                throw ConfigError("strategy", e->line, err.what());
            }
            if (std::find(cfg.strategies.begin(), cfg.strategies.end(), name) == cfg.strategies.end()) {
                cfg.strategies.push_back(name);
            }
        }
        if (cfg.strategies.empty()) throw ConfigError("strategy", e->line, "at least one strategy is required");
    }
    if (const auto* e = get("alpha")) {
        std::vector<double> values;
        for (const auto& item : detail::split_list(e->value)) {
            const double a = detail::config_double("alpha", {item, e->line});
            if (!(a > 0.0 && a < 1.0)) {
                throw ConfigError("alpha", e->line, "value " + item + " is outside (0, 1)");
            }
            values.push_back(a);
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (const double a : values) cfg.alphas.emplace_back(a);
    }
    const bool wants_trajedi =
        std::find(cfg.modes.begin(), cfg.modes.end(), Mode::trajedi) != cfg.modes.end();
    if (wants_trajedi && cfg.alphas.empty()) {
        const auto* e = get("mode");
        throw ConfigError("alpha", e ? e->line : 0, "trajedi mode needs at least one alpha value");
    }

    // Dataset source.
    const auto* truth = get("truth");
    const auto* degraded = get("degraded");
    const auto* generate = get("generate");
    const bool synthesize = generate && detail::config_bool("generate", *generate);
    if (synthesize && (truth || degraded)) {
        throw ConfigError("generate", generate->line, "cannot be combined with truth/degraded paths");
    }
    if (synthesize) {
        GeneratorConfig g;
        g.grid_n = cfg.grid_n;
        g.seed = cfg.seed;
        if (const auto* e = get("num_trajectories")) g.num_trajectories = detail::config_unsigned("num_trajectories", *e);
        if (const auto* e = get("initial_length")) g.initial_length = detail::config_unsigned("initial_length", *e);
        if (const auto* e = get("keep_mean")) g.keep_mean = detail::config_double("keep_mean", *e);
        if (const auto* e = get("keep_sd")) g.keep_sd = detail::config_double("keep_sd", *e);
        if (const auto* e = get("noise_sd")) g.noise_sd = detail::config_double("noise_sd", *e);
        try {
            g.validate();
        } catch (const UsageError& err) {
            throw ConfigError("generate", generate->line, err.what());
        }
        cfg.generator = g;
        cfg.dataset_name = "synthetic";
    } else {
        for (const char* key : {"num_trajectories", "initial_length", "keep_mean", "keep_sd", "noise_sd"}) {
            if (const auto* e = get(key)) {
                throw ConfigError(key, e->line, "generator settings need 'generate = true'");
            }
        }
        if (!truth && !degraded) {
            throw ConfigError("truth", 0, "missing dataset: give truth and degraded paths or generate = true");
        }
        if (!truth) throw ConfigError("truth", 0, "missing dataset: truth path is required");
        if (!degraded) throw ConfigError("degraded", 0, "missing dataset: degraded path is required");
        cfg.truth_path = truth->value;
        cfg.degraded_path = degraded->value;
        if (check_files) {
            if (!std::filesystem::exists(truth->value)) {
                throw ConfigError("truth", truth->line, "missing dataset file '" + truth->value + "'");
            }
            if (!std::filesystem::exists(degraded->value)) {
                throw ConfigError("degraded", degraded->line, "missing dataset file '" + degraded->value + "'");
            }
        }
        cfg.dataset_name = std::filesystem::path(degraded->value).stem().string();
    }
    if (const auto* e = get("dataset")) cfg.dataset_name = e->value;
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path,
                                    const std::map<std::string, std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    return parse_config(in, overrides);
}

// Results --------------------------------------------------------------------------

struct ExperimentRow {
    std::string dataset;
    Mode mode = Mode::none;
    std::optional<double> alpha;
    std::string strategy;
    double accuracy = 0.0;
    double efficiency = 0.0;
    TimingBreakdown timing;
    std::uint64_t seed = 0;
};

inline constexpr std::string_view results_header =
    "dataset,mode,alpha,strategy,accuracy,efficiency,calibration_ms,dtw_ms,total_ms,seed,"
    "partner_selection_ms";

/// Columns that hold wall-clock measurements (0-based).
inline constexpr std::size_t timing_columns[] = {6, 7, 8, 10};

inline void write_results_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
    using csv::format_double;
    out << results_header << '\n';
    for (const auto& r : rows) {
        out << r.dataset << ',' << mode_name(r.mode) << ','
            << (r.alpha ? format_double(*r.alpha) : std::string()) << ',' << r.strategy << ','
            << format_double(r.accuracy) << ',' << format_double(r.efficiency) << ','
            << format_double(r.timing.calibration_ms) << ',' << format_double(r.timing.dtw_ms) << ','
            << format_double(r.timing.total_ms) << ',' << r.seed << ','
            << format_double(r.timing.partner_selection_ms) << '\n';
    }
}

inline std::vector<ExperimentRow> read_results_csv(std::istream& in) {
    std::vector<ExperimentRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = csv::trim(raw);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != results_header) throw ParseError("unexpected results header", line_no);
            continue;
        }
        const auto f = csv::split(line);
        if (f.size() != 11) throw ParseError("expected 11 fields", line_no);
        ExperimentRow r;
        r.dataset = std::string(f[0]);
        try {
            r.mode = parse_mode(f[1]);
        } catch (const UsageError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!f[2].empty()) r.alpha = csv::parse_double(f[2], "alpha", line_no);
        r.strategy = std::string(f[3]);
        // accuracy may legitimately be "inf"
        r.accuracy = f[4] == "inf" ? std::numeric_limits<double>::infinity()
                                   : csv::parse_double(f[4], "accuracy", line_no);
        r.efficiency = csv::parse_double(f[5], "efficiency", line_no);
        r.timing.calibration_ms = csv::parse_double(f[6], "calibration_ms", line_no);
        r.timing.dtw_ms = csv::parse_double(f[7], "dtw_ms", line_no);
        r.timing.total_ms = csv::parse_double(f[8], "total_ms", line_no);
        const auto seed = csv::parse_integer(f[9], "seed", line_no);
        r.seed = static_cast<std::uint64_t>(seed);
        r.timing.partner_selection_ms = csv::parse_double(f[10], "partner_selection_ms", line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Results CSV text with the timing columns removed; stable across runs.
inline std::string strip_timing_columns(const std::string& results_csv) {
    std::istringstream in(results_csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto fields = csv::split(line);
        bool first = true;
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (std::find(std::begin(timing_columns), std::end(timing_columns), k) !=
                std::end(timing_columns)) {
                continue;
            }
            if (!first) out << ',';
            out << fields[k];
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

// Running ---------------------------------------------------------------------------

struct ExperimentData {
    Dataset truth;
    Dataset degraded;
};

inline ExperimentData load_experiment_data(const ExperimentConfig& cfg) {
    if (cfg.generator) {
        auto g = generate_dataset(*cfg.generator);
        return {std::move(g.truth), std::move(g.degraded)};
    }
    auto degraded = load_csv(*cfg.degraded_path);
    auto truth = load_csv(*cfg.truth_path);
    if (degraded.size() < 2) {
        throw UsageError("experiment needs at least two trajectories");
    }
    return {match_ids(degraded, truth), std::move(degraded)};
}

/// Runs every (mode, alpha, strategy) combination: modes in declared order,
/// alphas ascending, strategies in declared order. none/full ignore alpha and
/// strategy and yield one row each.
///
/// The raw all-pairs matrix is computed at most once and shared: it is the
/// `none` result and the input of furthest/shortest partner selection. Its
/// cost is charged to partner_selection_ms (and total_ms) of those rows.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg,
                                                 const ExperimentData& data) {
    const auto grid = cfg.grid();
    const auto params = cfg.params();
    params.validate();

    const auto truth_matrix = all_pairs_dtw(data.truth, cfg.threads);

    std::optional<PairwiseResult> raw;
    const auto raw_result = [&]() -> const PairwiseResult& {
        if (!raw) {
            PairwiseOptions opts;
            opts.mode = Mode::none;
            opts.threads = cfg.threads;
            raw = pairwise_distance_matrix(data.degraded, opts, grid, params);
        }
        return *raw;
    };

    std::vector<ExperimentRow> rows;
    const auto add_row = [&](Mode mode, std::optional<double> alpha, std::string strategy,
                             const PairwiseResult& r) {
        ExperimentRow row;
        row.dataset = cfg.dataset_name;
        row.mode = mode;
        row.alpha = alpha;
        row.strategy = std::move(strategy);
        row.accuracy = accuracy(r.distances, truth_matrix).value;
        row.efficiency = efficiency(r.plan, data.degraded).value;
        row.timing = r.timing;
        row.seed = cfg.seed;
        rows.push_back(std::move(row));
    };

    for (const auto mode : cfg.modes) {
        try {
            switch (mode) {
            case Mode::none:
                add_row(mode, std::nullopt, "", raw_result());
                break;
            case Mode::full: {
                PairwiseOptions opts;
                opts.mode = Mode::full;
                opts.threads = cfg.threads;
                add_row(mode, std::nullopt, "", pairwise_distance_matrix(data.degraded, opts, grid, params));
                break;
            }
            case Mode::trajedi:
                for (const auto alpha : cfg.alphas) {
                    for (const auto& name : cfg.strategies) {
                        PairwiseOptions opts;
                        opts.mode = Mode::trajedi;
                        opts.alpha = alpha;
                        opts.strategy = parse_strategy(name, cfg.seed);
                        opts.threads = cfg.threads;
                        double shared_ms = 0.0;
                        if (needs_raw_distances(*opts.strategy)) {
                            opts.raw_distances = &raw_result().distances;
                            shared_ms = raw_result().timing.total_ms;
                        }
                        auto r = pairwise_distance_matrix(data.degraded, opts, grid, params);
                        r.timing.partner_selection_ms += shared_ms;
                        r.timing.total_ms += shared_ms;
                        add_row(mode, alpha.value(), name, r);
                    }
                }
                break;
            }
        } catch (const UsageError& e) {
            throw UsageError("experiment mode '" + std::string(mode_name(mode)) + "': " + e.what());
        }
    }
    return rows;
}

inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    return run_experiment(cfg, load_experiment_data(cfg));
}

} // namespace trajedi

#endif // TRAJEDI_EXPERIMENT_HPP
