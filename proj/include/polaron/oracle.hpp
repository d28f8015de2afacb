// oracle.hpp — exact two-site + truncated bosonic bath simulator
//
// Basis of the single-particle sector: index = site * bath_dim + fock_index, with
// site 0 = |10> (particle on site 1) and site 1 = |01>. The Fock index enumerates
// (n_1, ..., n_Nb) with mode 0 most significant, n_k in [0, n_max].
// The full fermionic space orders the sectors |00>, |10>, |01>, |11>.

#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polaron/bath.hpp"
#include "polaron/dynamics.hpp"
#include "polaron/numerics.hpp"

namespace polaron::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct TruncatedBathConfig {
    std::vector<double> mode_freqs;
    std::vector<std::complex<double>> g1;  // coupling of each mode to site 1
    std::vector<std::complex<double>> g2;  // coupling of each mode to site 2
    int n_max{4};
    double epsilon{0.0};
    double j_hop{1.0};
    std::size_t dim_cap{4096};

    // Throws ConfigError; the dimension cap applies to the single-particle sector.
    void validate() const;

    std::size_t modes() const noexcept { return mode_freqs.size(); }
    std::size_t bath_dim() const;
    std::size_t dim() const { return 2 * bath_dim(); }

    // |alpha_k|^2 = |g1_k - g2_k|^2 / w_k^2
    std::vector<double> alpha_sq() const;
    double sum_alpha_sq() const;
    // V12 = sum_k (g1_k^* g2_k + g1_k g2_k^*) / w_k
    double v12() const;
    // Minimum bath excitation Delta E_B (smallest mode frequency).
    double min_gap() const;
    // J e^{-sum |alpha_k|^2 / 2}
    double effective_hopping() const;

    std::string describe() const;
};

// Midpoint discretization of the continuum bath on (0, omega_max] with real
// antisymmetric couplings g1_j = -g2_j = w_j |alpha_j| / 2, where
//   |alpha_j|^2 = 2 c Omega^2 x_j e^{-x_j^2} (1 - sinc(x_j Omega s)) dx,   x = w / Omega.
// The symmetric standing-wave partner of each mode couples to n1 + n2 = 1 in the
// single-particle sector and is omitted. The result is not validated (dim_cap may be raised first).
TruncatedBathConfig discretize_bath(const bath::BathModel& model, int n_modes, int n_max, double j_hop,
                                    double epsilon = 0.0, double omega_max = 4.0);

// Annihilation operator of mode k on the truncated bath space.
Matrix annihilation(const TruncatedBathConfig& config, std::size_t k);

// Single-particle block of H = H_S + H_B + H_I.
Matrix build_hamiltonian(const TruncatedBathConfig& config);

// H on all four fermion sectors (dimension 4 * bath_dim).
Matrix build_full_hamiltonian(const TruncatedBathConfig& config);

// Rows/columns of the |10>, |01> sectors of a full-space operator.
Matrix single_particle_block(const Matrix& full, const TruncatedBathConfig& config);

// S = -sum_{p,k} n_p (g_pk/w_k b_k - g_pk^*/w_k b_k^dagger) on the full space.
Matrix lang_firsov_generator(const TruncatedBathConfig& config);

// e^A for anti-Hermitian A, via the Hermitian eigenproblem of iA.
Matrix exp_anti_hermitian(const Matrix& a);

struct LangFirsovReport {
    double spectrum_deviation{0.0};
    std::complex<double> dressed_hopping;  // <10,vac| H' |01,vac>
    double expected_hopping{0.0};           // J e^{-sum |alpha|^2 / 2}
    double hopping_deviation{0.0};          // | |dressed_hopping| - expected_hopping |
    double implied_sum_alpha_sq{0.0};       // -2 ln(|dressed_hopping| / J)
    double site_shift[2]{0.0, 0.0};         // <p,vac|H'|p,vac> - epsilon
    double expected_site_shift[2]{0.0, 0.0};  // -sum_k |g_pk|^2 / w_k
    double pair_shift{0.0};                 // <11,vac|H'|11,vac> - 2 epsilon
    double expected_pair_shift{0.0};        // -sum_k (|g1|^2 + |g2|^2)/w_k - V12
    double truncation_weight{0.0};          // top-Fock-level population of the displaced vacua
    bool conclusive{true};
    int suggested_n_max{0};
};

// Numerical Lang-Firsov transformation H' = e^S H e^{-S} on the truncated space.
LangFirsovReport lang_firsov_check(const TruncatedBathConfig& config, double truncation_threshold = 1e-6);

struct FullState {
    Vector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

// |site state> (x) |vacuum>, with site amplitudes in the |10>, |01> basis.
FullState product_with_vacuum(const Eigen::Vector2cd& site_amplitudes, const TruncatedBathConfig& config);

// Exact propagator e^{-iH dt}; the eigendecomposition is computed once.
class Propagator {
public:
    explicit Propagator(const Matrix& hamiltonian);

    FullState step(const FullState& state, double dt) const;
    Matrix unitary(double dt) const;
    const Eigen::VectorXd& energies() const noexcept { return energies_; }

private:
    Eigen::VectorXd energies_;
    Matrix vectors_;
};

FullState evolve_exact(const FullState& state, const Propagator& propagator, double dt);

// Pi = a1^dagger a2 + a2^dagger a1: swaps the site blocks, identity on the bath.
FullState apply_pulse(const FullState& state, std::size_t bath_dim);
Matrix pulse_operator(const TruncatedBathConfig& config);

// Partial trace over every bath mode; result in the site basis (|10>, |01>).
Eigen::Matrix2cd reduced_site_matrix(const FullState& state, std::size_t bath_dim);
Eigen::Matrix2cd site_to_st(const Eigen::Matrix2cd& site);
Eigen::Matrix2cd st_to_site(const Eigen::Matrix2cd& st);

// Total time T = 2 N dt, instantaneous pulses.
struct PulseSchedule {
    double total_time{2.0};
    int cycles{4};

    double delta_t() const { return total_time / (2.0 * cycles); }
    void validate() const;
};

struct BangBangPoint {
    double delta_t{0.0};
    int n_cycles{0};
    double trace_distance_pulsed{0.0};
    double trace_distance_free{0.0};
};

struct BangBangReport {
    std::vector<BangBangPoint> points;
    double fitted_slope{0.0};      // d ln D / d ln dt over the pulsed series
    double fitted_log_prefactor{0.0};
};

// Runs N cycles of U(dt) Pi U(dt) Pi from rho0 (x) vacuum and the pulse-free
// evolution over the same T. Both are compared with the bare-system evolution
// U_S(T) rho0 U_S(T)^dagger. Mixed rho0 is decomposed into eigenvectors.
BangBangPoint run_bangbang(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                           const PulseSchedule& schedule);

BangBangReport run_bangbang_scan(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                                 double total_time, const std::vector<int>& cycles, unsigned jobs = 1);

// Least-squares slope of ln y against ln x.
std::pair<double, double> fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

enum class Frame { original, polaron };

struct ReferenceResult {
    dynamics::Trajectory trajectory;
    double jtilde_over_gap{0.0};  // effective hopping / min bath gap
};

// Exact reduced dynamics without pulses. In the polaron frame the initial state is
// rho0 (x) vacuum for H' = e^S H e^{-S} (the product-state assumption of the master equation).
ReferenceResult exact_decoherence_reference(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                                            const numerics::TimeGrid& grid, Frame frame = Frame::polaron);

struct ComparisonReport {
    ReferenceResult oracle;
    dynamics::Trajectory master;
    double rms_coherence_difference{0.0};
    double max_coherence_difference{0.0};
};

// Master-equation closed form with kernels summed over the same discrete modes.
ComparisonReport compare_with_master_equation(const TruncatedBathConfig& config,
                                              const dynamics::DensityMatrixST& rho0,
                                              const numerics::TimeGrid& grid);

// CSV columns delta_t, n_cycles, trace_distance_pulsed, trace_distance_free, fitted_slope,
// preceded by a comment line echoing the configuration.
void write_bangbang_csv(std::ostream& out, const BangBangReport& report, const std::string& config_echo);

// CSV columns t, C_oracle, C_master, abs_diff with comment lines for the diagnostics.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report, const std::string& config_echo);

} // namespace polaron::oracle
