// dynamics.cpp — ODE and closed-form evolution in the singlet/triplet basis

#include "polaron/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "polaron/errors.hpp"
#include "polaron/output.hpp"

namespace polaron::dynamics {

using cd = std::complex<double>;

DensityMatrixST DensityMatrixST::fig2_state() {
    return from_pure(std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0));
}

DensityMatrixST DensityMatrixST::maximally_mixed() { return {0.5, 0.5, {0.0, 0.0}}; }

DensityMatrixST DensityMatrixST::from_pure(cd amp_s, cd amp_t) {
    const double norm = std::norm(amp_s) + std::norm(amp_t);
    if (!(norm > 0.0)) throw ConfigError("pure state with zero norm");
    return {std::norm(amp_s) / norm, std::norm(amp_t) / norm, amp_s * std::conj(amp_t) / norm};
}

DensityMatrixST DensityMatrixST::from_matrix(const Eigen::Matrix2cd& m) {
    return {m(0, 0).real(), m(1, 1).real(), 0.5 * (m(0, 1) + std::conj(m(1, 0)))};
}

Eigen::Matrix2cd DensityMatrixST::matrix() const {
    Eigen::Matrix2cd m;
    m << rho_ss, rho_st, std::conj(rho_st), rho_tt;
    return m;
}

double DensityMatrixST::min_eigenvalue() const {
    const double diff = rho_ss - rho_tt;
    return 0.5 * (rho_ss + rho_tt - std::sqrt(diff * diff + 4.0 * std::norm(rho_st)));
}

void DensityMatrixST::validate() const {
    constexpr double tol = 1e-9;
    if (!std::isfinite(rho_ss) || rho_ss < -tol || rho_ss > 1.0 + tol)
        throw ConfigError(fmt::format("rho_ss = {} outside [0, 1]", rho_ss));
    if (!std::isfinite(rho_tt) || rho_tt < -tol || rho_tt > 1.0 + tol)
        throw ConfigError(fmt::format("rho_tt = {} outside [0, 1]", rho_tt));
    if (trace_error() > tol) throw ConfigError(fmt::format("rho_ss + rho_tt = {} is not 1", rho_ss + rho_tt));
    if (!std::isfinite(rho_st.real()) || !std::isfinite(rho_st.imag()))
        throw ConfigError("rho_st is not finite");
    if (rho_ss * rho_tt - std::norm(rho_st) < -1e-8)
        throw ConfigError(fmt::format("rho_st = ({}, {}) makes the state non-positive (|rho_st|^2 > rho_ss rho_tt)",
                                      rho_st.real(), rho_st.imag()));
}

double trace_distance(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    const Eigen::Matrix2cd d = a - b;
    const Eigen::Matrix2cd h = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(h, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------

namespace {

void fill_observables(Trajectory& traj) {
    const auto& rho0 = traj.states.front();
    traj.coherence_normalized = std::abs(rho0.rho_st) > 0.0;
    traj.coherence.resize(traj.states.size());
    const double norm0 = traj.coherence_normalized ? std::abs(rho0.rho_st) : 1.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) traj.coherence[k] = std::abs(traj.states[k].rho_st) / norm0;
    traj.pop_diff = population_difference(traj);
}

using OdeState = Eigen::Vector3d;

OdeState to_ode_state(const DensityMatrixST& rho) {
    const cd rho_ts = std::conj(rho.rho_st);
    return {rho.rho_ss, rho_ts.real(), rho_ts.imag()};
}

DensityMatrixST from_ode_state(const OdeState& v) {
    return {v[0], 1.0 - v[0], std::conj(cd(v[1], v[2]))};
}

// Integrates on the rate grid with `substeps` RK4 steps per grid interval.
std::vector<DensityMatrixST> integrate(const DensityMatrixST& rho0, const rates::RateTable& rates, int substeps) {
    const double t_end = rates.grid.t_max();
    auto derivative = [&rates, t_end](double t, const OdeState& v) -> OdeState {
        t = std::min(t, t_end);  // t + dt may overshoot the last grid point by rounding
        const double gp = rates::rate_at(rates, t, rates::Rate::gamma_plus);
        const double gm = rates::rate_at(rates, t, rates::Rate::gamma_minus);
        const double g0 = (2.0 * gp - gm) / 2.0;
        const double a = (gm + 6.0 * gp) / 2.0;
        const double b = (gm - 2.0 * gp) / 2.0;
        const cd rho_ts(v[1], v[2]);
        const cd d_ts = -a * rho_ts - b * std::conj(rho_ts);
        return {-g0 * (2.0 * v[0] - 1.0), d_ts.real(), d_ts.imag()};
    };

    const auto& grid = rates.grid;
    std::vector<DensityMatrixST> states;
    states.reserve(grid.size());
    OdeState v = to_ode_state(rho0);
    states.push_back(rho0);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double t0 = grid[k];
        const double h = (grid[k + 1] - t0) / substeps;
        for (int j = 0; j < substeps; ++j) {
            v = numerics::rk4_step(v, derivative, t0 + j * h, h);
        }
        states.push_back(from_ode_state(v));
    }
    return states;
}

double max_entry_difference(const DensityMatrixST& a, const DensityMatrixST& b) {
    return std::max({std::abs(a.rho_ss - b.rho_ss), std::abs(a.rho_tt - b.rho_tt), std::abs(a.rho_st - b.rho_st)});
}

} // namespace

Trajectory evolve_ode(const DensityMatrixST& rho0, const rates::RateTable& rates, const OdeOptions& options) {
    rho0.validate();
    Trajectory traj{rates.grid, integrate(rho0, rates, 1), {}, {}, true, 0.0};

    const auto refined = integrate(rho0, rates, 2);
    for (std::size_t k = 0; k < refined.size(); ++k)
        traj.step_halving_delta = std::max(traj.step_halving_delta, max_entry_difference(traj.states[k], refined[k]));
    if (traj.step_halving_delta > options.self_check_tolerance)
        throw NumericalError(fmt::format("RK4 step-halving self-check failed: max deviation {:.3g} > {:.3g} at dt = {}",
                                         traj.step_halving_delta, options.self_check_tolerance, rates.grid.dt()));

    fill_observables(traj);
    if (auto issue = check_legality(traj, options.trace_tolerance, options.positivity_tolerance))
        throw InvariantViolation(issue->what, issue->time);
    return traj;
}

Trajectory evolve_closed_form(const DensityMatrixST& rho0, const rates::RateTable& rates) {
    rho0.validate();
    const auto& grid = rates.grid;
    Trajectory traj{grid, {}, {}, {}, true, 0.0};
    traj.states.reserve(grid.size());
    const cd rho_st0 = rho0.rho_st;
    const cd rho_ts0 = std::conj(rho_st0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double e0 = std::exp(-2.0 * rates.cum_gamma0[k]);
        const double e1 = std::exp(-rates.cum_gamma1[k]);
        const double e2 = std::exp(-rates.cum_gamma2[k]);
        const double ss = 0.5 * rho0.rho_ss * (1.0 + e0) + 0.5 * rho0.rho_tt * (1.0 - e0);
        const cd st = 0.5 * rho_st0 * (e1 + e2) + 0.5 * rho_ts0 * (e1 - e2);
        traj.states.push_back({ss, 1.0 - ss, st});
    }
    fill_observables(traj);
    return traj;
}

std::vector<double> coherence(const Trajectory& traj) {
    if (traj.states.empty()) return {};
    const double c0 = std::abs(traj.states.front().rho_st);
    if (c0 == 0.0) throw ConfigError("initial coherence rho_st(0) is zero; normalized C(t) is undefined");
    std::vector<double> out(traj.states.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(traj.states[k].rho_st) / c0;
    return out;
}

std::vector<double> population_difference(const Trajectory& traj) {
    std::vector<double> out(traj.states.size());
    if (traj.states.empty()) return out;
    const auto& rho0 = traj.states.front();
    const double denom = std::abs(rho0.rho_tt + rho0.rho_ss);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = std::abs(traj.states[k].rho_tt - traj.states[k].rho_ss) / denom;
    return out;
}

std::optional<LegalityIssue> check_legality(const Trajectory& traj, double trace_tolerance,
                                            double positivity_tolerance) {
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto& rho = traj.states[k];
        const double terr = rho.trace_error();
        const double lmin = rho.min_eigenvalue();
        if (!(terr <= trace_tolerance) || !(lmin >= -positivity_tolerance)) {
            return LegalityIssue{traj.grid[k], terr, lmin,
                                 fmt::format("state invariant violated at t = {}: trace error {:.3g}, min eigenvalue {:.3g}",
                                             traj.grid[k], terr, lmin)};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

LambShiftReport lamb_shift_vanishes(const std::vector<DensityMatrixST>& states) {
    // two-site Fock basis |n1 n2>: |00>, |10>, |01>, |11>
    Eigen::Matrix4d n1 = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d n2 = Eigen::Matrix4d::Zero();
    n1(1, 1) = n1(3, 3) = 1.0;
    n2(2, 2) = n2(3, 3) = 1.0;
    const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
    const Eigen::Matrix4d op = n1 * (id - n2) + n2 * (id - n1);

    // sector basis vectors |S>, |T> as columns
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix<double, 4, 2> basis = Eigen::Matrix<double, 4, 2>::Zero();
    basis(1, 0) = r;
    basis(2, 0) = -r;
    basis(1, 1) = r;
    basis(2, 1) = r;

    LambShiftReport report;
    report.sector_operator = (basis.transpose() * op * basis).cast<cd>();
    report.identity_deviation = (report.sector_operator - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    for (const auto& rho : states) {
        const Eigen::Matrix2cd m = rho.matrix();
        const Eigen::Matrix2cd comm = report.sector_operator * m - m * report.sector_operator;
        report.max_commutator_entry = std::max(report.max_commutator_entry, comm.cwiseAbs().maxCoeff());
        ++report.states_checked;
    }
    return report;
}

LambShiftReport lamb_shift_vanishes(std::size_t random_states, std::uint64_t seed) {
    std::vector<DensityMatrixST> states{DensityMatrixST::fig2_state(), DensityMatrixST::maximally_mixed()};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < random_states; ++i) {
        const double ss = 0.5 * (1.0 + u(rng));
        states.push_back({ss, 1.0 - ss, cd(u(rng), u(rng))});
    }
    return lamb_shift_vanishes(states);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    output::CsvWriter csv(out, {"t", "rho_ss", "rho_tt", "re_rho_st", "im_rho_st", "C", "P_D"});
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto& s = traj.states[k];
        csv.row({traj.grid[k], s.rho_ss, s.rho_tt, s.rho_st.real(), s.rho_st.imag(), traj.coherence[k],
                 traj.pop_diff[k]});
    }
}

} // namespace polaron::dynamics
