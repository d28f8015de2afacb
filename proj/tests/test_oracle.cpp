// test_oracle.cpp — truncated-bath exact simulator

#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "polaron/errors.hpp"
#include "polaron/oracle.hpp"

using namespace polaron;
using namespace polaron::oracle;

namespace {

TruncatedBathConfig single_mode(double g1, double g2, int n_max, double j = 1.0) {
    TruncatedBathConfig c;
    c.mode_freqs = {1.0};
    c.g1 = {{g1, 0.0}};
    c.g2 = {{g2, 0.0}};
    c.n_max = n_max;
    c.j_hop = j;
    return c;
}

TruncatedBathConfig random_config(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    TruncatedBathConfig c;
    c.mode_freqs = {0.7, 1.9};
    c.g1 = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    c.g2 = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    c.n_max = 4;
    c.epsilon = 0.3;
    c.j_hop = 0.8;
    return c;
}

double hermiticity_residual(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("configuration validation") {
    auto c = single_mode(0.5, 0.0, 4);
    CHECK_NOTHROW(c.validate());
    CHECK(c.bath_dim() == 5);
    CHECK(c.dim() == 10);

    auto bad = c;
    bad.mode_freqs = {0.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.n_max = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.g2.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.mode_freqs = {1.0, 1.0, 1.0, 1.0, 1.0};
    bad.g1.assign(5, {0.1, 0.0});
    bad.g2.assign(5, {0.0, 0.0});
    bad.n_max = 6;  // 2 * 7^5 > 4096
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("exceeds the cap"), ConfigError);
}

TEST_CASE("derived coupling quantities") {
    auto c = single_mode(0.5, -0.25, 4);
    CHECK(c.alpha_sq()[0] == doctest::Approx(0.5625));
    CHECK(c.v12() == doctest::Approx(-0.25));
    CHECK(c.effective_hopping() == doctest::Approx(std::exp(-0.28125)));
    CHECK(c.min_gap() == 1.0);
}

TEST_CASE("ladder operators obey the truncated algebra") {
    const auto c = random_config(3);
    const Matrix b0 = annihilation(c, 0);
    const Matrix b1 = annihilation(c, 1);
    const Matrix comm = b0 * b0.adjoint() - b0.adjoint() * b0;
    // [b, b^dagger] = 1 except on the top Fock level of that mode
    int ones = 0;
    for (Eigen::Index i = 0; i < comm.rows(); ++i) ones += std::abs(comm(i, i) - 1.0) < 1e-12;
    CHECK(ones == static_cast<int>(c.bath_dim() - c.bath_dim() / (c.n_max + 1)));
    CHECK((b0 * b1 - b1 * b0).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((b0 * b1.adjoint() - b1.adjoint() * b0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Hamiltonians are Hermitian") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto c = random_config(seed);
        CHECK(hermiticity_residual(build_hamiltonian(c)) < 1e-12);
        CHECK(hermiticity_residual(build_full_hamiltonian(c)) < 1e-12);
        const Matrix block = single_particle_block(build_full_hamiltonian(c), c);
        CHECK((block - build_hamiltonian(c)).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("Lang-Firsov generator is anti-Hermitian and its exponential unitary") {
    const auto c = random_config(5);
    const Matrix s = lang_firsov_generator(c);
    CHECK((s + s.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    const Matrix u = exp_anti_hermitian(s);
    CHECK((u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Lang-Firsov check, single mode alpha = 0.5") {
    for (int n_max : {12, 16}) {
        const auto report = lang_firsov_check(single_mode(0.5, 0.0, n_max));
        CHECK(report.spectrum_deviation < 1e-8);
        CHECK(std::abs(std::abs(report.dressed_hopping) - std::exp(-0.125)) < 1e-4);
        CHECK(report.hopping_deviation < 1e-4);
        CHECK(report.site_shift[0] == doctest::Approx(report.expected_site_shift[0]).epsilon(1e-8));
        CHECK(report.site_shift[1] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(report.conclusive);
    }
}

TEST_CASE("Lang-Firsov check, two modes with both sites coupled") {
    TruncatedBathConfig c;
    c.mode_freqs = {0.8, 1.5};
    c.g1 = {{0.3, 0.0}, {0.2, 0.0}};
    c.g2 = {{-0.25, 0.0}, {0.1, 0.0}};
    c.n_max = 10;
    c.epsilon = 0.2;
    const auto report = lang_firsov_check(c);
    CHECK(report.spectrum_deviation < 1e-8);
    CHECK(report.implied_sum_alpha_sq == doctest::Approx(c.sum_alpha_sq()).epsilon(1e-6));
    for (int p = 0; p < 2; ++p) CHECK(report.site_shift[p] == doctest::Approx(report.expected_site_shift[p]).epsilon(1e-8));
    CHECK(report.pair_shift == doctest::Approx(report.expected_pair_shift).epsilon(1e-8));
}

TEST_CASE("Lang-Firsov check flags a too-small cutoff") {
    const auto report = lang_firsov_check(single_mode(1.5, 0.0, 3));
    CHECK_FALSE(report.conclusive);
    CHECK(report.suggested_n_max > 3);
}

TEST_CASE("propagation is unitary over many steps") {
    const auto c = random_config(11);
    const Propagator prop(build_hamiltonian(c));
    Eigen::Vector2cd site(1.0, 0.0);
    FullState psi = product_with_vacuum(site, c);
    for (int i = 0; i < 10000; ++i) psi = evolve_exact(psi, prop, 0.01);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
}

TEST_CASE("pulse algebra") {
    const auto c = random_config(13);
    const Matrix p = pulse_operator(c);
    CHECK((p * p - Matrix::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff() == 0.0);
    // Pi commutes with the system part but swaps the site couplings
    auto system_only = c;
    for (auto& g : system_only.g1) g = 0.0;
    for (auto& g : system_only.g2) g = 0.0;
    const Matrix hs = build_hamiltonian(system_only);
    CHECK((p * hs - hs * p).cwiseAbs().maxCoeff() < 1e-15);
    auto swapped = c;
    std::swap(swapped.g1, swapped.g2);
    CHECK((p * build_hamiltonian(c) * p - build_hamiltonian(swapped)).cwiseAbs().maxCoeff() < 1e-14);

    FullState psi = product_with_vacuum(Eigen::Vector2cd(0.6, 0.8), c);
    const FullState flipped = apply_pulse(psi, c.bath_dim());
    CHECK((flipped.amplitudes - p * psi.amplitudes).norm() == 0.0);
}

TEST_CASE("reduced density matrix and basis change") {
    const auto c = single_mode(0.3, 0.0, 3);
    const Eigen::Vector2cd site(std::sqrt(0.5), std::complex<double>(0.0, std::sqrt(0.5)));
    const auto rho = reduced_site_matrix(product_with_vacuum(site, c), c.bath_dim());
    CHECK(std::abs(rho(0, 1) - site[0] * std::conj(site[1])) < 1e-15);
    const auto st = site_to_st(rho);
    CHECK((st_to_site(st) - rho).cwiseAbs().maxCoeff() < 1e-15);

    // |10> - |01> is the singlet
    Eigen::Matrix2cd singlet_site;
    singlet_site << 0.5, -0.5, -0.5, 0.5;
    CHECK(std::abs(site_to_st(singlet_site)(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("bath discretization") {
    const bath::BathModel model{1.0, 1.0, 10.0, 1.0};
    const auto c = discretize_bath(model, 4, 3, 0.5);
    CHECK(c.modes() == 4);
    CHECK(c.mode_freqs[0] == doctest::Approx(0.5));
    CHECK(c.mode_freqs[3] == doctest::Approx(3.5));
    for (std::size_t k = 0; k < 4; ++k) CHECK(c.g1[k] == -c.g2[k]);
    // the discrete sum approximates K_c(0) for a fine mesh
    const auto fine = discretize_bath(model, 400, 1, 0.5);
    CHECK(fine.sum_alpha_sq() == doctest::Approx(bath::kernel_zero(model)).epsilon(1e-3));
}

TEST_CASE("far-detuned weak mode barely decoheres") {
    TruncatedBathConfig c;
    c.mode_freqs = {5.0};
    c.g1 = {{0.05, 0.0}};
    c.g2 = {{-0.05, 0.0}};
    c.n_max = 4;
    c.j_hop = 1.0;
    const numerics::TimeGrid grid(10.0, 0.05);
    const auto ref = exact_decoherence_reference(c, dynamics::DensityMatrixST::fig2_state(), grid, Frame::original);
    for (double v : ref.trajectory.coherence) CHECK(v >= 0.99);
}

TEST_CASE("bang-bang pulses suppress decoherence with quadratic scaling") {
    const auto c = discretize_bath(bath::BathModel{}, 2, 6, 1.0);
    const auto report = run_bangbang_scan(c, dynamics::DensityMatrixST::fig2_state(), 2.0, {4, 8, 16, 32, 64});
    REQUIRE(report.points.size() == 5);
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        CHECK(report.points[i].trace_distance_pulsed < report.points[i].trace_distance_free);
        if (i > 0) CHECK(report.points[i].trace_distance_pulsed < report.points[i - 1].trace_distance_pulsed);
    }
    CHECK(report.fitted_slope >= 1.7);

    const auto single = run_bangbang(c, dynamics::DensityMatrixST::fig2_state(), PulseSchedule{2.0, 8});
    CHECK(single.delta_t == 0.125);
    CHECK(single.trace_distance_pulsed == doctest::Approx(report.points[1].trace_distance_pulsed).epsilon(1e-12));
    CHECK_THROWS_AS(PulseSchedule({2.0, 0}).validate(), ConfigError);
}

TEST_CASE("no coupling: pulses and free evolution both follow the bare system") {
    auto c = single_mode(0.0, 0.0, 2);
    const auto point = run_bangbang(c, dynamics::DensityMatrixST::fig2_state(), PulseSchedule{2.0, 4});
    CHECK(point.trace_distance_free < 1e-12);
    CHECK(point.trace_distance_pulsed < 1e-12);
}

TEST_CASE("log-log fit recovers a power law") {
    const std::vector<double> x{0.1, 0.2, 0.4, 0.8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const auto [slope, prefactor] = fit_log_log(x, y);
    CHECK(slope == doctest::Approx(2.0));
    CHECK(prefactor == doctest::Approx(std::log(3.0)));
    CHECK_THROWS_AS(fit_log_log({1.0}, {1.0}), ConfigError);
}

TEST_CASE("oracle agrees with the master equation in the weak-hopping regime") {
    const auto c = discretize_bath(bath::BathModel{1.0, 1.0, 10.0, 1.0}, 2, 6, 0.1);
    const auto report = compare_with_master_equation(c, dynamics::DensityMatrixST::fig2_state(), numerics::TimeGrid(10.0, 0.02));
    CHECK(report.oracle.jtilde_over_gap <= 0.1);
    CHECK(report.rms_coherence_difference <= 0.1);
    CHECK(report.oracle.trajectory.coherence[0] == doctest::Approx(1.0));

    std::ostringstream out;
    write_comparison_csv(out, report, c.describe());
    CHECK(out.str().find("t,C_oracle,C_master,abs_diff\n") != std::string::npos);
    std::ostringstream bb;
    write_bangbang_csv(bb, BangBangReport{{{0.25, 4, 0.1, 0.2}}, 2.0, 0.0}, "echo");
    CHECK(bb.str() == "# echo\ndelta_t,n_cycles,trace_distance_pulsed,trace_distance_free,fitted_slope\n0.25,4,0.1,0.2,2\n");
}
