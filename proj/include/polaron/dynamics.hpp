// dynamics.hpp — singlet/triplet density-matrix evolution and its observables

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polaron/numerics.hpp"
#include "polaron/rates.hpp"

namespace polaron::dynamics {

// Reduced state of the single-particle sector in the basis
//   |S> = (|10> - |01>)/sqrt2,  |T> = (|10> + |01>)/sqrt2.
// Only <S|rho|T> is stored; <T|rho|S> is its conjugate.
struct DensityMatrixST {
    double rho_ss{0.5};
    double rho_tt{0.5};
    std::complex<double> rho_st{0.0, 0.0};

    // sqrt(2/3)|S> + sqrt(1/3)|T>
    static DensityMatrixST fig2_state();
    static DensityMatrixST maximally_mixed();
    static DensityMatrixST from_pure(std::complex<double> amp_s, std::complex<double> amp_t);
    // Hermitian part of a 2x2 matrix in (S, T) ordering.
    static DensityMatrixST from_matrix(const Eigen::Matrix2cd& m);

    Eigen::Matrix2cd matrix() const;
    double trace_error() const { return std::abs(rho_ss + rho_tt - 1.0); }
    double min_eigenvalue() const;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Trace distance 1/2 ||a - b||_1 of 2x2 Hermitian matrices.
double trace_distance(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);

struct Trajectory {
    numerics::TimeGrid grid;
    std::vector<DensityMatrixST> states;
    // C(t) = |rho_ST(t)| / |rho_ST(0)|, or |rho_ST(t)| when coherence_normalized is false
    std::vector<double> coherence;
    std::vector<double> pop_diff;
    bool coherence_normalized{true};
    // max deviation between the run and a run at half the step (RK4 only)
    double step_halving_delta{0.0};
};

struct OdeOptions {
    // step-halving self-check threshold; exceeded -> NumericalError
    double self_check_tolerance{1e-6};
    double trace_tolerance{1e-9};
    double positivity_tolerance{1e-8};
};

// RK4 integration of
//   d rho_TT/dt = -Gamma_0 (rho_TT - rho_SS),  d rho_SS/dt = -Gamma_0 (rho_SS - rho_TT)
//   d rho_TS/dt = -((g_- + 6 g_+)/2) rho_TS - ((g_- - 2 g_+)/2) rho_ST
// with state (rho_SS, Re rho_TS, Im rho_TS); rho_TT = 1 - rho_SS.
// Rates at half steps are linearly interpolated from the table.
// Throws InvariantViolation on the first state breaking trace/positivity tolerances.
Trajectory evolve_ode(const DensityMatrixST& rho0, const rates::RateTable& rates, const OdeOptions& options = {});

// Closed-form solution in terms of the cumulative Gamma integrals:
//   rho_SS = rho_SS(0) (1 + e0)/2 + rho_TT(0) (1 - e0)/2,   e0 = exp(-2 int Gamma_0)
//   rho_ST = rho_ST(0) (e1 + e2)/2 + rho_TS(0) (e1 - e2)/2, e1,2 = exp(-int Gamma_1,2)
// The factor 2 in e0 is what the population equations above integrate to.
Trajectory evolve_closed_form(const DensityMatrixST& rho0, const rates::RateTable& rates);

// Normalized coherence; throws ConfigError when rho_ST(0) = 0.
std::vector<double> coherence(const Trajectory& traj);

// |rho_TT - rho_SS| / |rho_TT(0) + rho_SS(0)|
std::vector<double> population_difference(const Trajectory& traj);

struct LegalityIssue {
    double time{0.0};
    double trace_error{0.0};
    double min_eigenvalue{0.0};
    std::string what;
};

std::optional<LegalityIssue> check_legality(const Trajectory& traj, double trace_tolerance = 1e-9,
                                            double positivity_tolerance = 1e-8);

// Builds N = n1(1-n2) + n2(1-n1) on the two-site Fock space, restricts it to the
// single-particle sector and checks [N, rho] = 0 for the supplied states.
struct LambShiftReport {
    Eigen::Matrix2cd sector_operator;
    double identity_deviation{0.0};
    double max_commutator_entry{0.0};
    std::size_t states_checked{0};

    bool vanishes(double tol = 1e-15) const { return identity_deviation < tol && max_commutator_entry < tol; }
};

LambShiftReport lamb_shift_vanishes(const std::vector<DensityMatrixST>& states);
// The sqrt(2/3)|S> + sqrt(1/3)|T> state, the maximally mixed state and `random_states` random Hermitian unit-trace states.
LambShiftReport lamb_shift_vanishes(std::size_t random_states = 16, std::uint64_t seed = 7);

// CSV columns t, rho_ss, rho_tt, re_rho_st, im_rho_st, C, P_D.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

} // namespace polaron::dynamics
