// test_config.cpp — config parsing, overrides and echo

#include "doctest.h"

#include <cmath>

#include "polaron/config.hpp"
#include "polaron/errors.hpp"

using namespace polaron;
using namespace polaron::config;

TEST_CASE("empty input gives documented defaults") {
    const auto c = parse_config("", "<test>", {{"mode", "single", "verb"}});
    CHECK(c.mode == Mode::single);
    CHECK(c.bath.lambda_g == 1.0);
    CHECK(c.bath.s == 1.0);
    CHECK(c.j_hop == 1.0);
    CHECK(c.t_max == 50.0);
    CHECK(c.dt == 0.005);
    CHECK(c.rho_ss == doctest::Approx(2.0 / 3.0));
    CHECK(c.re_rho_st == doctest::Approx(std::sqrt(2.0) / 3.0));
    CHECK(c.im_rho_st == 0.0);
    CHECK(c.s_values == std::vector<double>{1.0, 10.0, 100.0});
    CHECK(c.cycles == std::vector<int>{4, 8, 16, 32, 64});
    CHECK(c.initial_state().min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("flags override file values") {
    const auto c = parse_config("mode = single\ns = 1\n", "run.ini", {{"s", "100", "--s"}});
    CHECK(c.bath.s == 100.0);
}

TEST_CASE("comments, blank lines and lists") {
    const auto c = parse_config("# header\n\nmode = sweep-s   # trailing\ns_values = 0.5, 2 ,8\ncycles=2,4\nsvg = yes\n", "x");
    CHECK(c.mode == Mode::sweep_s);
    CHECK(c.s_values == std::vector<double>{0.5, 2.0, 8.0});
    CHECK(c.cycles == std::vector<int>{2, 4});
    CHECK(c.svg);
}

TEST_CASE("errors carry the key and location") {
    CHECK_THROWS_WITH_AS(parse_config("mode = single\nbogus = 1\n", "run.ini"), "run.ini:2: unknown key 'bogus'",
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = single\ndt = fast\n", "run.ini"),
                         doctest::Contains("run.ini:2: invalid value for 'dt'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = single\n", "run.ini", {{"t_max", "abc", "--tmax"}}),
                         doctest::Contains("--tmax"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = single\nrho_ss = 1.5\n", "run.ini"), doctest::Contains("rho_ss"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("", "run.ini"), doctest::Contains("mode"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = everything\n", "run.ini"), doctest::Contains("unknown mode"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = single\njust words\n", "run.ini"), doctest::Contains("run.ini:2"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("mode = single\nre_rho_st = 0.6\n", "run.ini"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode = bangbang\ncycles = 4, 0\n", "run.ini"), ConfigError);
}

TEST_CASE("echo round-trips exactly") {
    const auto c = parse_config("mode = oracle-compare\nlambda_g = 0.123456789012345\nj_hop = 0.1\nseed = 42\n", "x",
                                {{"out", "/tmp/somewhere", "--out"}, {"jobs", "3", "--jobs"}});
    const std::string echo = echo_config(c);
    CHECK(echo.find("out =") == std::string::npos);
    CHECK(echo.find("jobs =") == std::string::npos);
    const auto again = parse_config(echo, "echo");
    CHECK(again.bath.lambda_g == c.bath.lambda_g);
    CHECK(again.rho_ss == c.rho_ss);
    CHECK(again.re_rho_st == c.re_rho_st);
    CHECK(again.seed == 42);
    CHECK(echo_config(again) == echo);
}

TEST_CASE("mode names") {
    for (Mode m : {Mode::single, Mode::sweep_s, Mode::sweep_lambda, Mode::effective_hopping, Mode::bangbang,
                   Mode::oracle_compare, Mode::selftest})
        CHECK(parse_mode(mode_name(m)) == m);
    CHECK_FALSE(parse_mode("nope").has_value());
    CHECK(known_keys().front() == "mode");
}
