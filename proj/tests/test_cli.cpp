#include "trajedi/csv.hpp"
#include "trajedi/experiment.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string output;
};

/// Runs the CLI with stderr folded into the captured output.
Run cli(const std::string& args) {
    const std::string cmd = std::string(TRAJEDI_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    while (const auto n = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("trajedi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void generate() {
        const auto r = cli("generate --name small --out_dir " + dir_.string() +
                           " --grid_n 30 --num_trajectories 5 --initial_length 40 --keep_mean 25 --keep_sd 5 --seed 3");
        ASSERT_EQ(r.status, 0) << r.output;
    }

    fs::path dir_;
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_F(CliTest, GenerateWritesBothFiles) {
    generate();
    const auto truth = trajedi::load_csv(path("small.truth.csv"));
    const auto degraded = trajedi::load_csv(path("small.degraded.csv"));
    EXPECT_EQ(truth.size(), 5u);
    EXPECT_EQ(degraded.size(), 5u);
    EXPECT_EQ(truth[0].size(), 40u);
}

TEST_F(CliTest, SelfDistanceIsZero) {
    generate();
    const auto r = cli("distance --dataset " + path("small.degraded.csv") + " --a t001 --b t001");
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(r.output, "0\n");
}

TEST_F(CliTest, DistanceModes) {
    generate();
    const auto base = "distance --dataset " + path("small.degraded.csv") + " --a t000 --b t003 --grid_n 30";
    const auto none = cli(base);
    const auto full = cli(base + " --mode full");
    const auto traj = cli(base + " --mode trajedi --alpha 0.3 --strategy furthest");
    EXPECT_EQ(none.status, 0);
    EXPECT_EQ(full.status, 0);
    EXPECT_EQ(traj.status, 0) << traj.output;
    EXPECT_GT(std::stod(none.output), 0.0);
    EXPECT_EQ(cli(base + " --mode trajedi").status, 1);
    EXPECT_EQ(cli(base + " --mode sideways").status, 1);
}

TEST_F(CliTest, UnknownTrajectoryIdIsUsageError) {
    generate();
    EXPECT_EQ(cli("distance --dataset " + path("small.degraded.csv") + " --a t000 --b nope").status, 1);
}

TEST_F(CliTest, CalibrateWritesAnchorCsv) {
    generate();
    const auto r = cli("calibrate --input " + path("small.degraded.csv") + " --grid_n 30 --output " +
                       path("cal.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    const auto cal = trajedi::load_csv(path("cal.csv"));
    EXPECT_EQ(cal.size(), 5u);
    const auto grid = trajedi::build_grid({0, 0, 30, 30}, 30);
    for (const auto& t : cal) {
        for (const auto& p : t.points()) EXPECT_EQ(trajedi::nearest_anchor(grid, p).distance, 0.0);
    }
}

TEST_F(CliTest, ExperimentWritesResults) {
    generate();
    {
        std::ofstream cfg(path("small.cfg"));
        cfg << "truth = " << path("small.truth.csv") << "\n"
            << "degraded = " << path("small.degraded.csv") << "\n"
            << "grid_n = 30\nalpha = 0.2, 0.5\noutput = " << path("results.csv") << "\n";
    }
    const auto r = cli("experiment --config " + path("small.cfg"));
    ASSERT_EQ(r.status, 0) << r.output;
    std::ifstream in(path("results.csv"));
    const auto rows = trajedi::read_results_csv(in);
    EXPECT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0].dataset, "small.degraded");

    const auto again = cli("experiment --config " + path("small.cfg") + " --output " + path("again.csv") +
                           " --threads 2");
    ASSERT_EQ(again.status, 0) << again.output;
    EXPECT_EQ(trajedi::strip_timing_columns(slurp(path("results.csv"))),
              trajedi::strip_timing_columns(slurp(path("again.csv"))));
}

TEST_F(CliTest, ConfigErrorsAreUsageErrors) {
    {
        std::ofstream cfg(path("bad.cfg"));
        cfg << "foo = 1\n";
    }
    const auto r = cli("experiment --config " + path("bad.cfg"));
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("foo"), std::string::npos);
}

TEST_F(CliTest, CostCurveRows) {
    const auto r = cli("cost-curve --lengths 20,40 --trials 2 --grid_n 50 --output " + path("cost.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    std::ifstream in(path("cost.csv"));
    EXPECT_EQ(trajedi::read_cost_curve_csv(in).size(), 2u);
}

TEST_F(CliTest, UnknownSubcommandPrintsUsage) {
    const auto r = cli("frobnicate");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("Usage"), std::string::npos);
    EXPECT_EQ(cli("").status, 1);
}

TEST_F(CliTest, MalformedCsvIsDataError) {
    {
        std::ofstream bad(path("bad.csv"));
        bad << "t1,0,abc,0\n";
    }
    const auto r = cli("distance --dataset " + path("bad.csv") + " --a t1 --b t1");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.output.find("line 1"), std::string::npos);
}
