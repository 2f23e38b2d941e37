// Command-line front end: dataset generation, calibration, single distances,
// experiment sweeps and the calibration cost curve.

#include "trajedi/trajedi.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace trajedi;

constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_internal = 3;

/// Grid and calibration flags shared by several subcommands.
struct GridFlags {
    std::size_t grid_n = 1000;
    std::vector<double> extent;
    std::optional<double> align_threshold;
    std::optional<double> complement_threshold;

    void add_to(CLI::App& app) {
        app.add_option("--grid_n", grid_n, "Grid cells per side")->capture_default_str();
        app.add_option("--extent", extent, "min_x,min_y,max_x,max_y (default 0,0,grid_n,grid_n)")
            ->delimiter(',')
            ->expected(4);
        app.add_option("--align_threshold", align_threshold, "Max snap distance");
        app.add_option("--complement_threshold", complement_threshold,
                       "Max anchor distance from an interpolated segment");
    }

    AnchorGrid grid() const {
        const auto side = static_cast<double>(grid_n);
        const Extent e = extent.empty() ? Extent{0.0, 0.0, side, side}
                                        : Extent{extent[0], extent[1], extent[2], extent[3]};
        return AnchorGrid(e, grid_n);
    }

    CalibrationParams params() const {
        auto p = CalibrationParams::defaults_for(grid());
        if (align_threshold) p.align_threshold = *align_threshold;
        if (complement_threshold) p.complement_threshold = *complement_threshold;
        p.validate();
        return p;
    }
};

void write_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path.empty() || path == "-") {
        emit(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write '" + path + "'", 0);
    }
    emit(out);
}

int run(int argc, char** argv) {
    CLI::App app{"Calibration-aware trajectory distances"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write <name>.truth.csv and <name>.degraded.csv");
    GeneratorConfig gcfg;
    std::string gen_name = "synthetic";
    std::string gen_dir = ".";
    gen->add_option("--name", gen_name, "Dataset name")->capture_default_str();
    gen->add_option("--out_dir", gen_dir, "Output directory")->capture_default_str();
    gen->add_option("--grid_n", gcfg.grid_n, "Grid cells per side")->capture_default_str();
    gen->add_option("--num_trajectories", gcfg.num_trajectories)->capture_default_str();
    gen->add_option("--initial_length", gcfg.initial_length)->capture_default_str();
    gen->add_option("--keep_mean", gcfg.keep_mean)->capture_default_str();
    gen->add_option("--keep_sd", gcfg.keep_sd)->capture_default_str();
    gen->add_option("--noise_sd", gcfg.noise_sd, "Default: a quarter of the cell width");
    gen->add_option("--seed", gcfg.seed)->capture_default_str();

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Fully calibrate every trajectory of a dataset");
    std::string cal_in;
    std::string cal_out = "-";
    GridFlags cal_grid;
    cal->add_option("--input", cal_in, "Trajectory CSV")->required();
    cal->add_option("--output", cal_out, "Output CSV ('-' for stdout)")->capture_default_str();
    cal_grid.add_to(*cal);

    // distance
    auto* dist = app.add_subcommand("distance", "DTW distance between two trajectories of a dataset");
    std::string dist_data;
    std::string dist_a;
    std::string dist_b;
    std::string dist_mode = "none";
    std::optional<double> dist_alpha;
    std::string dist_strategy = "random";
    std::uint64_t dist_seed = 0;
    std::size_t dist_threads = 1;
    GridFlags dist_grid;
    dist->add_option("--dataset", dist_data, "Trajectory CSV")->required();
    dist->add_option("--a", dist_a, "First trajectory id")->required();
    dist->add_option("--b", dist_b, "Second trajectory id")->required();
    dist->add_option("--mode", dist_mode, "none, full or trajedi")->capture_default_str();
    dist->add_option("--alpha", dist_alpha, "Window fraction (trajedi)");
    dist->add_option("--strategy", dist_strategy, "random, furthest or shortest")->capture_default_str();
    dist->add_option("--seed", dist_seed)->capture_default_str();
    dist->add_option("--threads", dist_threads)->capture_default_str();
    dist_grid.add_to(*dist);

    // experiment: every config key doubles as a flag of the same name
    auto* exp = app.add_subcommand("experiment", "Run an experiment sweep and write the results CSV");
    std::string exp_config;
    exp->add_option("--config", exp_config, "Config file (key = value)")->required();
    std::map<std::string, std::optional<std::string>> exp_overrides;
    for (const auto& key : detail::config_keys()) {
        exp->add_option("--" + key, exp_overrides[key], "Override config key '" + key + "'");
    }

    // cost-curve
    auto* cost = app.add_subcommand("cost-curve", "Time full calibration against trajectory length");
    std::vector<std::size_t> cost_lengths{250, 500, 1000, 2000};
    std::size_t cost_trials = 10;
    std::uint64_t cost_seed = 0;
    std::string cost_out = "-";
    GridFlags cost_grid;
    cost->add_option("--lengths", cost_lengths, "Points per trajectory")->delimiter(',')->capture_default_str();
    cost->add_option("--trials", cost_trials)->capture_default_str();
    cost->add_option("--seed", cost_seed)->capture_default_str();
    cost->add_option("--output", cost_out, "Output CSV ('-' for stdout)")->capture_default_str();
    cost_grid.add_to(*cost);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    if (gen->parsed()) {
        const auto data = generate_dataset(gcfg);
        std::filesystem::create_directories(gen_dir);
        const auto base = std::filesystem::path(gen_dir) / gen_name;
        save_csv(data.truth, base.string() + ".truth.csv");
        save_csv(data.degraded, base.string() + ".degraded.csv");
        std::cerr << "wrote " << base.string() << ".truth.csv and " << base.string()
                  << ".degraded.csv (" << data.truth.size() << " trajectories)\n";
    } else if (cal->parsed()) {
        const auto ds = load_csv(cal_in);
        const auto grid = cal_grid.grid();
        const auto params = cal_grid.params();
        Dataset out;
        for (const auto& t : ds) {
            out.add(calibrate(t, grid, params).trajectory);
        }
        write_output(cal_out, [&](std::ostream& o) { csv::write_trajectories(o, out); });
    } else if (dist->parsed()) {
        const auto ds = load_csv(dist_data);
        const auto ia = ds.find(dist_a);
        const auto ib = ds.find(dist_b);
        if (!ia) throw UsageError("unknown trajectory id '" + dist_a + "'");
        if (!ib) throw UsageError("unknown trajectory id '" + dist_b + "'");
        PairwiseOptions opts;
        opts.mode = parse_mode(dist_mode);
        opts.threads = dist_threads;
        double d = 0.0;
        if (opts.mode == Mode::none) {
            d = dtw_distance(ds[*ia], ds[*ib]);
        } else {
            if (opts.mode == Mode::trajedi) {
                if (!dist_alpha) throw UsageError("--alpha is required with --mode trajedi");
                opts.alpha = Alpha(*dist_alpha);
                opts.strategy = parse_strategy(dist_strategy, dist_seed);
            }
            const auto r = pairwise_distance_matrix(ds, opts, dist_grid.grid(), dist_grid.params());
            d = r.distances(*ia, *ib);
        }
        std::cout << csv::format_double(d) << '\n';
    } else if (exp->parsed()) {
        std::map<std::string, std::string> overrides;
        for (const auto& [key, value] : exp_overrides) {
            if (value) overrides[key] = *value;
        }
        const auto cfg = load_config(exp_config, overrides);
        const auto rows = run_experiment(cfg);
        write_output(cfg.output, [&](std::ostream& o) { write_results_csv(o, rows); });
        std::cerr << "wrote " << rows.size() << " rows to " << cfg.output << '\n';
    } else if (cost->parsed()) {
        const auto rows = calibration_cost_curve(cost_lengths, cost_trials, cost_grid.grid(),
                                                 cost_grid.params(), cost_seed);
        write_output(cost_out, [&](std::ostream& o) { write_cost_curve_csv(o, rows); });
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const trajedi::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const trajedi::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const trajedi::InvariantError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}
