#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dicke/cli/run.hpp"

using namespace dicke;
using namespace dicke::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::path(::testing::TempDir()) / ("dicke_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_json(const fs::path& dir, const std::string& text) {
    const auto path = dir / "run.json";
    std::ofstream(path) << text;
    return path;
}

int run_exe(const std::string& args) {
    const std::string cmd = std::string(DICKE_LAB_EXE) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST(LoadConfig, FlagsOnly) {
    const auto cfg = load_config({"scan-entropy", "--j", "4.5", "--mode", "integrable", "--lambda", "0:2:0.01"});
    EXPECT_EQ(cfg.command, "scan-entropy");
    EXPECT_EQ(cfg.params.j, 4.5);
    EXPECT_EQ(cfg.mode, ScanMode::integrable);
    ASSERT_TRUE(cfg.lambda.has_value());
    EXPECT_EQ(cfg.lambda->grid().size(), 201u);
    EXPECT_EQ(cfg.formats.size(), 3u);
}

TEST(LoadConfig, RejectsUnknownKeyByName) {
    const auto dir = scratch("unknown_key");
    const auto path = write_json(dir, R"({"command": "fixed-points", "j": 4.5, "couplingX": 1.0})");
    try {
        load_config({"--config", path.string()});
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_NE(std::string(e.what()).find("couplingX"), std::string::npos) << e.what();
    }
}

TEST(LoadConfig, RejectsNonHalfIntegerSpin) {
    EXPECT_THROW(load_config({"fixed-points", "--j", "4.6"}), invalid_input);
}

TEST(LoadConfig, FlagsOverrideFile) {
    const auto dir = scratch("override");
    const auto path = write_json(
        dir, R"({"command": "scan-entropy", "j": 1.5, "g": 0.2, "lambda": {"start": 0, "end": 1, "step": 0.5},
                 "formats": ["csv"], "n_max": 12})");
    const auto cfg = load_config({"--config", path.string(), "--j", "2.5", "--lambda", "0:2:0.5"});
    EXPECT_EQ(cfg.params.j, 2.5);
    EXPECT_EQ(cfg.params.g, 0.2);
    EXPECT_EQ(cfg.lambda->end, 2.0);
    EXPECT_EQ(cfg.n_max, 12);
    EXPECT_EQ(cfg.formats, std::vector<std::string>{"csv"});
}

TEST(LoadConfig, SchemaErrors) {
    const auto dir = scratch("schema");
    EXPECT_THROW(load_config({"--config", write_json(dir, R"({"j": "big"})").string(), "wigner"}), config_error);
    EXPECT_THROW(load_config({"--config", write_json(dir, R"([1, 2])").string(), "wigner"}), config_error);
    EXPECT_THROW(load_config({"--config", (dir / "missing.json").string(), "wigner"}), config_error);
    EXPECT_THROW(load_config({"scan-entropy", "--j", "1.5"}), config_error); // lambda required
    EXPECT_THROW(load_config({"scan-entropy", "--lambda", "0:1:0"}), config_error);
    EXPECT_THROW(load_config({"scan-entropy", "--lambda", "0:1"}), config_error);
    EXPECT_THROW(load_config({"wigner", "--format", "png"}), config_error);
    EXPECT_THROW(load_config({"--j", "1.5"}), config_error); // no command
    EXPECT_THROW(load_config({"fly", "--j", "1.5"}), config_error);
    EXPECT_THROW(load_config({"wigner", "--mode", "chaotic"}), invalid_input);
}

TEST(Run, ScanEntropyStaircase) {
    const auto dir = scratch("scan");
    auto cfg = load_config({"scan-entropy", "--j", "4.5", "--mode", "integrable", "--lambda", "0:2:0.05", "--out",
                            dir.string()});
    run(cfg);
    const auto rows = read_csv(dir / "entropy.csv");
    ASSERT_GE(rows.size(), 2u);
    const std::vector<std::string> head{"lambda", "lambda_plus", "energy", "entropy", "participation", "degenerate"};
    for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(rows[0][i], head[i]);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double lam = std::stod(rows[r][0]), s = std::stod(rows[r][3]);
        if (lam < 1.0 - 1e-9) {
            EXPECT_EQ(s, 0.0) << lam;
        }
        if (lam > 1.0 + 1e-9) {
            EXPECT_GE(s, 0.5 - 1e-6) << lam;
        }
    }
    EXPECT_TRUE(fs::exists(dir / "entropy.svg"));
    EXPECT_TRUE(fs::exists(dir / "entropy.json"));
    const auto provenance = nlohmann::json::parse(slurp(dir / "config.json"));
    EXPECT_EQ(provenance["command"], "scan-entropy");
    EXPECT_EQ(provenance["j"], 4.5);
    EXPECT_EQ(provenance["lambda"], "0:2:0.050000000000000003");
}

TEST(Run, FixedPointsJson) {
    const auto dir = scratch("fixed");
    run(load_config({"fixed-points", "--j", "4.5", "--g", "0.75", "--g-prime", "0.75", "--out", dir.string()}));
    const auto doc = nlohmann::json::parse(slurp(dir / "fixed_points.json"));
    int found = 0;
    for (const auto& fp : doc["fixed_points"]) {
        if (fp["kind"] != "pitchfork_I") continue;
        ++found;
        EXPECT_NEAR(std::abs(fp["representative"]["p1"].get<double>()), std::sqrt(5.0), 1e-12);
        EXPECT_LT(fp["residual"].get<double>(), 1e-10);
    }
    EXPECT_EQ(found, 2);
    // sorted keys
    const auto text = slurp(dir / "fixed_points.json");
    EXPECT_LT(text.find("\"fixed_points\""), text.find("\"params\""));
}

TEST(Run, WignerSvgHasContourAndClassicalCircle) {
    const auto dir = scratch("wigner");
    run(load_config({"wigner", "--j", "4.5", "--g", "1.5", "--grid-size", "128", "--out", dir.string()}));
    const auto svg = slurp(dir / "wigner.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("50% of max"), std::string::npos);
    EXPECT_NE(svg.find("classical minimum-energy circle"), std::string::npos);
    EXPECT_NE(svg.find("<path"), std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(dir / "wigner.json"));
    EXPECT_NEAR(summary["unit_integral"].get<double>(), 1.0, 1e-10);
    EXPECT_FALSE(summary["ridge_radius"].is_null());
    const auto rows = read_csv(dir / "wigner.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "y", "w"}));
}

TEST(Run, TrajectoryOutputs) {
    const auto dir = scratch("trajectory");
    run(load_config({"trajectory", "--j", "4.5", "--g", "0.75", "--g-prime", "0.75", "--energy", "-5.5",
                     "--t-final", "20", "--out", dir.string()}));
    const auto rows = read_csv(dir / "trajectory.csv");
    ASSERT_GT(rows.size(), 10u);
    for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_NEAR(std::stod(rows[r][7]), -5.5, 1e-8);
    EXPECT_TRUE(fs::exists(dir / "trajectory.svg"));
}

TEST(Run, FormatSelection) {
    const auto dir = scratch("formats");
    run(load_config({"bifurcation", "--j", "4.5", "--lambda", "0.8:1.2:0.2", "--format", "json", "--out",
                     dir.string()}));
    EXPECT_TRUE(fs::exists(dir / "bifurcation.json"));
    EXPECT_FALSE(fs::exists(dir / "bifurcation.csv"));
    EXPECT_FALSE(fs::exists(dir / "bifurcation.svg"));
    EXPECT_TRUE(fs::exists(dir / "config.json"));
}

TEST(Run, Deterministic) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    for (const auto& dir : {a, b})
        run(load_config({"report", "--j", "2.5", "--g", "0.6", "--g-prime", "0.6", "--mode", "symmetric", "--lambda",
                         "0.5:1.5:0.25", "--grid-size", "64", "--t-final", "5", "--out", dir.string()}));
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "config.json") continue; // records the differing output path
        EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
        ++compared;
    }
    EXPECT_GE(compared, 10u);
}

TEST(Render, RejectsEmptyData) {
    EXPECT_THROW(io::render_line_plot({}), invalid_input);
    EXPECT_THROW(io::render_wigner_heatmap(WignerGrid{}, {}), invalid_input);
}

TEST(Render, LevelSegmentsOfALinearRamp) {
    // v = x on a 4x4 grid: the level 1.5 is the vertical line through x = 1.5
    std::vector<double> v(16);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(j * 4 + i)] = i;
    const auto segs = io::level_segments(v, 4, 1.5, 0.0, 1.0);
    ASSERT_EQ(segs.size(), 3u);
    for (const auto& s : segs) {
        EXPECT_DOUBLE_EQ(s[0], 1.5);
        EXPECT_DOUBLE_EQ(s[2], 1.5);
    }
}

TEST(Executable, ExitCodes) {
    const auto dir = scratch("exe");
    EXPECT_EQ(run_exe("fixed-points --j 4.5 --g 1.5 --out " + dir.string()), 0);
    EXPECT_EQ(run_exe("fixed-points --j 4.6 --out " + dir.string()), 1);
    EXPECT_EQ(run_exe("fixed-points --j 4.5 --bogus 1"), 1);
    EXPECT_EQ(run_exe("--help"), 0);
    const auto cfg = write_json(dir, R"({"command": "wigner", "couplingX": 2})");
    EXPECT_EQ(run_exe("--config " + cfg.string()), 1);
    // truncation cap too small for the tolerance: numerical failure
    EXPECT_EQ(run_exe("scan-entropy --j 0.5 --mode symmetric --lambda 1.5:2:0.5 --truncation-tol 1e-300 --out " +
                      dir.string()),
              2);
    // energy below the lowest fixed point
    EXPECT_EQ(run_exe("trajectory --j 4.5 --g 1.5 --energy -100 --out " + dir.string()), 1);
}
