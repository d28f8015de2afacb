// test_bath.cpp — correlation kernels and effective hopping

#include "doctest.h"

#include <cmath>

#include "polaron/bath.hpp"
#include "polaron/errors.hpp"
#include "polaron/numerics.hpp"

using namespace polaron;
using namespace polaron::bath;

namespace {

const double sqrt_pi = std::sqrt(std::acos(-1.0));

// Closed forms of the kernels (Omega = 1, c = lambda) from
//   int x e^{-x^2} cos(a x) dx = 1/2 - (a/2) F(a),   int e^{-x^2} sin(a x) dx = F(a)
double kc_closed(double lambda, double s, double u) {
    using numerics::dawson_sine;
    return 2.0 * lambda *
           ((0.5 - 0.5 * u * dawson_sine(u)) - (dawson_sine(s + u) + dawson_sine(s - u)) / (2.0 * s));
}

//   int x e^{-x^2} sin(a x) dx = (sqrt(pi)/4) a e^{-a^2/4},   int e^{-x^2} cos(a x) dx = (sqrt(pi)/2) e^{-a^2/4}
double ks_closed(double lambda, double s, double u) {
    return 2.0 * lambda *
           (0.25 * sqrt_pi * u * std::exp(-u * u / 4.0) -
            sqrt_pi / (4.0 * s) * (std::exp(-(s - u) * (s - u) / 4.0) - std::exp(-(s + u) * (s + u) / 4.0)));
}

} // namespace

TEST_CASE("sinc") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-15));
    CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("kernels agree with their closed forms") {
    for (double lambda : {0.3, 1.0, 4.0}) {
        for (double s : {0.5, 1.0, 10.0, 100.0}) {
            const BathModel model{lambda, 1.0, s, 1.0};
            for (double u : {0.0, 0.3, 1.0, 2.7, 9.5, 40.0}) {
                CAPTURE(lambda);
                CAPTURE(s);
                CAPTURE(u);
                CHECK(std::abs(kernel_cos(u, model) - kc_closed(lambda, s, u)) <= 1e-10);
                CHECK(std::abs(kernel_sin(u, model) - ks_closed(lambda, s, u)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("frozen kernel values") {
    const BathModel model{1.0, 1.0, 1.0, 1.0};
    CHECK(kernel_sin(1.0, model) == doctest::Approx(0.12999196415545955).epsilon(1e-10));
    CHECK(kernel_cos(1.0, model) == doctest::Approx(0.037484109585209265).epsilon(1e-9));
    const BathModel wide{1.0, 1.0, 100.0, 1.0};
    CHECK(kernel_cos(0.5, wide) == doctest::Approx(0.8798803731883924).epsilon(1e-10));
    CHECK(kernel_sin(0.5, wide) == doctest::Approx(0.41626657519367266).epsilon(1e-10));
}

TEST_CASE("kernel at zero lag") {
    for (double lambda : {0.1, 1.0, 5.0}) {
        for (double s : {0.1, 1.0, 10.0, 100.0}) {
            const BathModel model{lambda, 1.0, s, 1.0};
            const double expected = lambda * 2.0 * (0.5 - numerics::dawson_sine(s) / s);
            CHECK(std::abs(kernel_zero(model) - expected) <= 1e-12);
            CHECK(std::abs(kernel_cos(0.0, model) - expected) <= 1e-8);
            CHECK(kernel_sin(0.0, model) == 0.0);
        }
    }
}

TEST_CASE("no coupling means no kernel") {
    const BathModel at_zero_s{1.0, 1.0, 0.0, 1.0};
    const BathModel no_lambda{0.0, 1.0, 5.0, 1.0};
    for (double u : {0.0, 1.0, 3.0}) {
        CHECK(kernel_cos(u, at_zero_s) == 0.0);
        CHECK(kernel_sin(u, at_zero_s) == 0.0);
        CHECK(kernel_cos(u, no_lambda) == 0.0);
    }
    CHECK(effective_hopping_ratio(at_zero_s) == 1.0);
    CHECK(effective_hopping_ratio(no_lambda) == 1.0);
}

TEST_CASE("effective hopping decreases and saturates") {
    double previous = 1.0;
    for (int i = 1; i <= 20; ++i) {
        const double r = effective_hopping_ratio({0.1 * i, 1.0, 3.0, 1.0});
        CHECK(r < previous);
        CHECK(r > 0.0);
        previous = r;
    }
    for (double lambda : {0.5, 1.0, 2.0})
        CHECK(std::abs(effective_hopping_ratio({lambda, 1.0, 1e4, 1.0}) - std::exp(-lambda / 2.0)) <= 1e-3);
    CHECK(std::abs(effective_hopping_ratio({1.0, 1.0, 1e-6, 1.0}) - 1.0) <= 1e-9);
}

TEST_CASE("geometry factor scales the coupling") {
    const BathModel doubled{1.0, 1.0, 2.0, 2.0};
    const BathModel plain{2.0, 1.0, 2.0, 1.0};
    CHECK(kernel_cos(1.3, doubled) == doctest::Approx(kernel_cos(1.3, plain)).epsilon(1e-14));
}

TEST_CASE("bath validation names the field") {
    CHECK_THROWS_WITH_AS(BathModel({-1.0, 1.0, 1.0, 1.0}).validate(), doctest::Contains("lambda"), ConfigError);
    CHECK_THROWS_WITH_AS(BathModel({1.0, 1.0, -2.0, 1.0}).validate(), doctest::Contains("s must"), ConfigError);
    CHECK_THROWS_AS(BathModel({1.0, 0.0, 1.0, 1.0}).validate(), ConfigError);
}

TEST_CASE("kernel tables") {
    const numerics::TimeGrid grid(2.0, 0.5);
    const BathModel model{1.0, 1.0, 1.0, 1.0};
    const auto table = build_kernel_table(model, grid, {}, 2);
    REQUIRE(table.k_cos.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(table.k_cos[k] == kernel_cos(grid[k], model));
        CHECK(table.k_sin[k] == kernel_sin(grid[k], model));
    }

    const std::vector<double> freqs{1.0, 2.0};
    const std::vector<double> weights{0.25, 0.5};
    const auto discrete = build_discrete_kernel_table(freqs, weights, grid);
    CHECK(discrete.k_cos[0] == doctest::Approx(0.75));
    CHECK(discrete.k_sin[2] == doctest::Approx(0.25 * std::sin(1.0) + 0.5 * std::sin(2.0)));
}
