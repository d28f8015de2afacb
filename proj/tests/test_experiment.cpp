// test_experiment.cpp — orchestration and output files

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polaron/config.hpp"
#include "polaron/experiment.hpp"

using namespace polaron;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("polaron_deco_test_" + name);
    fs::remove_all(dir);
    return dir;
}

config::ExperimentConfig small(const std::string& mode, const fs::path& out) {
    return config::parse_config("t_max = 2\ndt = 0.01\nhopping_lambda_points = 5\nhopping_s_points = 5\n", "test",
                                {{"mode", mode, "verb"}, {"out", out.string(), "--out"}});
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("single run writes trajectory, rates and the echo") {
    const auto dir = scratch("single");
    auto cfg = small("single", dir);
    cfg.svg = true;
    const auto summary = experiment::run_experiment(cfg);
    CHECK(fs::exists(dir / experiment::echo_file_name));
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "rates.csv"));
    CHECK(fs::exists(dir / "trajectory.svg"));
    CHECK(summary.files.size() == 4);
    const auto rows = lines_of(slurp(dir / "trajectory.csv"));
    CHECK(rows.size() == 202);
    fs::remove_all(dir);
}

TEST_CASE("s = 0 keeps the coherence at 1") {
    const auto dir = scratch("s0");
    auto cfg = small("single", dir);
    cfg.bath.s = 0.0;
    experiment::run_experiment(cfg);
    const auto rows = lines_of(slurp(dir / "trajectory.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto last_comma = rows[i].rfind(',');
        const auto c_comma = rows[i].rfind(',', last_comma - 1);
        CHECK(rows[i].substr(c_comma + 1, last_comma - c_comma - 1) == "1");
    }
    fs::remove_all(dir);
}

TEST_CASE("effective hopping tables are monotone") {
    const auto dir = scratch("hop");
    auto cfg = small("effective-hopping", dir);
    cfg.s_values = {1.0, 5.0, 10.0};
    experiment::run_experiment(cfg);
    const auto rows = lines_of(slurp(dir / "fig1a.csv"));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "lambda_g,ratio_s1,ratio_s5,ratio_s10");
    std::vector<std::vector<double>> values;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<double> row;
        std::istringstream in(rows[i]);
        for (std::string cell; std::getline(in, cell, ',');) row.push_back(std::stod(cell));
        values.push_back(row);
    }
    for (std::size_t i = 1; i < values.size(); ++i)
        for (std::size_t j = 1; j < values[i].size(); ++j) CHECK(values[i][j] < values[i - 1][j]);
    CHECK(fs::exists(dir / "fig1b.csv"));
    fs::remove_all(dir);
}

TEST_CASE("sweeps are deterministic and independent of the worker count") {
    const auto a = scratch("sweep_a");
    const auto b = scratch("sweep_b");
    auto cfg = small("sweep-s", a);
    cfg.jobs = 1;
    experiment::run_experiment(cfg);
    cfg.out_dir = b.string();
    cfg.jobs = 3;
    experiment::run_experiment(cfg);
    for (const char* name : {"fig2a.csv", "fig2bcd.csv", experiment::echo_file_name})
        CHECK(slurp(a / name) == slurp(b / name));
    CHECK(lines_of(slurp(a / "fig2bcd.csv"))[0] ==
          "t,P_D_s1,P_D_s10,P_D_s100,rho_tt_s1,rho_tt_s10,rho_tt_s100,rho_ss_s1,rho_ss_s10,rho_ss_s100");
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("re-running from the echo reproduces the outputs") {
    const auto a = scratch("echo_a");
    const auto b = scratch("echo_b");
    auto cfg = small("sweep-lambda", a);
    experiment::run_experiment(cfg);
    const auto replay = config::parse_config(slurp(a / experiment::echo_file_name), "echo", {{"out", b.string(), "--out"}});
    experiment::run_experiment(replay);
    CHECK(slurp(a / "sweep_lambda.csv") == slurp(b / "sweep_lambda.csv"));
    CHECK(slurp(a / experiment::echo_file_name) == slurp(b / experiment::echo_file_name));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("bangbang and oracle-compare outputs") {
    const auto dir = scratch("oracle");
    auto cfg = small("bangbang", dir);
    const auto summary = experiment::run_experiment(cfg);
    const auto rows = lines_of(slurp(dir / "bangbang.csv"));
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].rfind("# modes=2 nmax=6", 0) == 0);
    CHECK(rows[1] == "delta_t,n_cycles,trace_distance_pulsed,trace_distance_free,fitted_slope");
    const double slope = std::stod(rows[2].substr(rows[2].rfind(',') + 1));
    CHECK(slope >= 1.7);

    cfg = small("oracle-compare", dir);
    cfg.j_hop = 0.1;
    cfg.bath.s = 10.0;
    experiment::run_experiment(cfg);
    CHECK(fs::exists(dir / "compare.csv"));
    fs::remove_all(dir);
}

TEST_CASE("selftest passes") {
    for (const auto& line : experiment::run_selftest()) {
        CAPTURE(line.name);
        CAPTURE(line.detail);
        CHECK(line.passed);
    }
}
