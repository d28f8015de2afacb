// oracle.cpp — dense exact simulation of the two-site polaron with a truncated bath

#include "polaron/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "polaron/errors.hpp"
#include "polaron/output.hpp"
#include "polaron/rates.hpp"

namespace polaron::oracle {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// configuration

void TruncatedBathConfig::validate() const {
    if (mode_freqs.empty()) throw ConfigError("oracle needs at least one bath mode");
    if (g1.size() != mode_freqs.size() || g2.size() != mode_freqs.size())
        throw ConfigError(fmt::format("oracle: {} modes but {} / {} couplings", mode_freqs.size(), g1.size(), g2.size()));
    for (std::size_t k = 0; k < mode_freqs.size(); ++k) {
        if (!(mode_freqs[k] > 0.0) || !std::isfinite(mode_freqs[k]))
            throw ConfigError(fmt::format("oracle: mode frequency {} must be > 0 (got {})", k, mode_freqs[k]));
    }
    if (n_max < 1) throw ConfigError(fmt::format("nmax must be >= 1 (got {})", n_max));
    if (!std::isfinite(epsilon) || !std::isfinite(j_hop)) throw ConfigError("oracle: epsilon and J must be finite");
    double dim_estimate = 2.0 * std::pow(n_max + 1.0, static_cast<double>(mode_freqs.size()));
    if (dim_estimate > static_cast<double>(dim_cap))
        throw ConfigError(fmt::format("oracle: Hilbert dimension 2*({}+1)^{} = {} exceeds the cap {}", n_max,
                                      mode_freqs.size(), dim_estimate, dim_cap));
}

std::size_t TruncatedBathConfig::bath_dim() const {
    std::size_t d = 1;
    for (std::size_t k = 0; k < mode_freqs.size(); ++k) d *= static_cast<std::size_t>(n_max + 1);
    return d;
}

std::vector<double> TruncatedBathConfig::alpha_sq() const {
    std::vector<double> out(mode_freqs.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(g1[k] - g2[k]) / (mode_freqs[k] * mode_freqs[k]);
    return out;
}

double TruncatedBathConfig::sum_alpha_sq() const {
    double sum = 0.0;
    for (double a : alpha_sq()) sum += a;
    return sum;
}

double TruncatedBathConfig::v12() const {
    double v = 0.0;
    for (std::size_t k = 0; k < mode_freqs.size(); ++k)
        v += (std::conj(g1[k]) * g2[k] + g1[k] * std::conj(g2[k])).real() / mode_freqs[k];
    return v;
}

double TruncatedBathConfig::min_gap() const { return *std::min_element(mode_freqs.begin(), mode_freqs.end()); }

double TruncatedBathConfig::effective_hopping() const { return j_hop * std::exp(-0.5 * sum_alpha_sq()); }

std::string TruncatedBathConfig::describe() const {
    std::string out = fmt::format("modes={} nmax={} epsilon={} J={} freqs=[", modes(), n_max, output::format_number(epsilon),
                                  output::format_number(j_hop));
    for (std::size_t k = 0; k < modes(); ++k) out += (k ? " " : "") + output::format_number(mode_freqs[k]);
    out += "] g1=[";
    for (std::size_t k = 0; k < modes(); ++k)
        out += (k ? " " : "") + output::format_number(g1[k].real()) + (g1[k].imag() != 0.0 ? "+" + output::format_number(g1[k].imag()) + "i" : "");
    out += "] g2=[";
    for (std::size_t k = 0; k < modes(); ++k)
        out += (k ? " " : "") + output::format_number(g2[k].real()) + (g2[k].imag() != 0.0 ? "+" + output::format_number(g2[k].imag()) + "i" : "");
    return out + "]";
}

TruncatedBathConfig discretize_bath(const bath::BathModel& model, int n_modes, int n_max, double j_hop,
                                    double epsilon, double omega_max) {
    model.validate();
    if (n_modes < 1) throw ConfigError(fmt::format("modes must be >= 1 (got {})", n_modes));
    if (!(omega_max > 0.0)) throw ConfigError(fmt::format("omega_max must be > 0 (got {})", omega_max));

    TruncatedBathConfig config;
    config.n_max = n_max;
    config.j_hop = j_hop;
    config.epsilon = epsilon;
    const double omega = model.omega_c;
    const double dx = omega_max / omega / n_modes;
    for (int j = 0; j < n_modes; ++j) {
        const double x = (j + 0.5) * dx;
        const double w = omega * x;
        const double alpha_sq =
            2.0 * model.coupling() * omega * omega * x * std::exp(-x * x) * (1.0 - bath::sinc(x * omega * model.s)) * dx;
        const double amp = 0.5 * w * std::sqrt(std::max(alpha_sq, 0.0));
        config.mode_freqs.push_back(w);
        config.g1.emplace_back(amp, 0.0);
        config.g2.emplace_back(-amp, 0.0);
    }
    return config;
}

// ---------------------------------------------------------------------------
// operators

namespace {

std::size_t mode_stride(const TruncatedBathConfig& config, std::size_t k) {
    std::size_t stride = 1;
    for (std::size_t j = k + 1; j < config.modes(); ++j) stride *= static_cast<std::size_t>(config.n_max + 1);
    return stride;
}

int occupation(std::size_t index, std::size_t stride, int n_max) {
    return static_cast<int>((index / stride) % static_cast<std::size_t>(n_max + 1));
}

Matrix bath_energy(const TruncatedBathConfig& config) {
    const std::size_t d = config.bath_dim();
    Matrix h = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < config.modes(); ++k) {
        const std::size_t stride = mode_stride(config, k);
        for (std::size_t i = 0; i < d; ++i) h(i, i) += config.mode_freqs[k] * occupation(i, stride, config.n_max);
    }
    return h;
}

// sum_k (c_k b_k + conj(c_k) b_k^dagger)
Matrix linear_coupling(const TruncatedBathConfig& config, const std::vector<cd>& c) {
    const std::size_t d = config.bath_dim();
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < config.modes(); ++k) {
        const Matrix b = annihilation(config, k);
        out += c[k] * b + std::conj(c[k]) * b.adjoint();
    }
    return out;
}

// sum_k (c_k b_k - conj(c_k) b_k^dagger)
Matrix anti_linear_coupling(const TruncatedBathConfig& config, const std::vector<cd>& c) {
    const std::size_t d = config.bath_dim();
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < config.modes(); ++k) {
        const Matrix b = annihilation(config, k);
        out += c[k] * b - std::conj(c[k]) * b.adjoint();
    }
    return out;
}

// fermion sectors |00>, |10>, |01>, |11>
constexpr int occ1[4] = {0, 1, 0, 1};
constexpr int occ2[4] = {0, 0, 1, 1};

} // namespace

Matrix annihilation(const TruncatedBathConfig& config, std::size_t k) {
    const std::size_t d = config.bath_dim();
    const std::size_t stride = mode_stride(config, k);
    Matrix b = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const int n = occupation(i, stride, config.n_max);
        if (n > 0) b(i - stride, i) = std::sqrt(static_cast<double>(n));
    }
    return b;
}

Matrix build_full_hamiltonian(const TruncatedBathConfig& config) {
    config.validate();
    const std::size_t d = config.bath_dim();
    const Matrix hb = bath_energy(config);
    const Matrix b1 = linear_coupling(config, config.g1);
    const Matrix b2 = linear_coupling(config, config.g2);
    const Matrix id = Matrix::Identity(d, d);

    Matrix h = Matrix::Zero(4 * d, 4 * d);
    for (int f = 0; f < 4; ++f) {
        h.block(f * d, f * d, d, d) = config.epsilon * (occ1[f] + occ2[f]) * id + hb + double(occ1[f]) * b1 + double(occ2[f]) * b2;
    }
    // a1^dagger a2 |01> = |10> and its conjugate; both signs are + in this ordering
    h.block(1 * d, 2 * d, d, d) = config.j_hop * id;
    h.block(2 * d, 1 * d, d, d) = config.j_hop * id;
    return h;
}

Matrix single_particle_block(const Matrix& full, const TruncatedBathConfig& config) {
    const auto d = static_cast<Eigen::Index>(config.bath_dim());
    return full.block(d, d, 2 * d, 2 * d);
}

Matrix build_hamiltonian(const TruncatedBathConfig& config) {
    config.validate();
    const std::size_t d = config.bath_dim();
    const Matrix hb = bath_energy(config);
    const Matrix id = Matrix::Identity(d, d);
    Matrix h = Matrix::Zero(2 * d, 2 * d);
    h.block(0, 0, d, d) = config.epsilon * id + hb + linear_coupling(config, config.g1);
    h.block(d, d, d, d) = config.epsilon * id + hb + linear_coupling(config, config.g2);
    h.block(0, d, d, d) = config.j_hop * id;
    h.block(d, 0, d, d) = config.j_hop * id;
    return h;
}

Matrix lang_firsov_generator(const TruncatedBathConfig& config) {
    config.validate();
    const std::size_t d = config.bath_dim();
    std::vector<cd> c1(config.modes()), c2(config.modes());
    for (std::size_t k = 0; k < config.modes(); ++k) {
        c1[k] = config.g1[k] / config.mode_freqs[k];
        c2[k] = config.g2[k] / config.mode_freqs[k];
    }
    const Matrix a1 = anti_linear_coupling(config, c1);
    const Matrix a2 = anti_linear_coupling(config, c2);
    Matrix s = Matrix::Zero(4 * d, 4 * d);
    for (int f = 0; f < 4; ++f) s.block(f * d, f * d, d, d) = -(double(occ1[f]) * a1 + double(occ2[f]) * a2);
    return s;
}

Matrix exp_anti_hermitian(const Matrix& a) {
    const Matrix h = cd(0.0, 1.0) * a;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()));
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    Eigen::VectorXcd phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) phases[i] = std::exp(cd(0.0, -lambda[i]));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Lang-Firsov check

LangFirsovReport lang_firsov_check(const TruncatedBathConfig& config, double truncation_threshold) {
    config.validate();
    const auto d = static_cast<Eigen::Index>(config.bath_dim());
    const Matrix h = build_full_hamiltonian(config);
    const Matrix s = lang_firsov_generator(config);
    const Matrix es = exp_anti_hermitian(s);
    const Matrix h_prime = es * h * es.adjoint();

    LangFirsovReport report;

    Eigen::SelfAdjointEigenSolver<Matrix> eig_h(h, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> eig_hp(0.5 * (h_prime + h_prime.adjoint()), Eigen::EigenvaluesOnly);
    report.spectrum_deviation = (eig_h.eigenvalues() - eig_hp.eigenvalues()).cwiseAbs().maxCoeff();

    const Eigen::Index vac10 = 1 * d;
    const Eigen::Index vac01 = 2 * d;
    const Eigen::Index vac11 = 3 * d;
    report.dressed_hopping = h_prime(vac10, vac01);
    report.expected_hopping = config.effective_hopping();
    report.hopping_deviation = std::abs(std::abs(report.dressed_hopping) - report.expected_hopping);
    if (config.j_hop != 0.0 && std::abs(report.dressed_hopping) > 0.0)
        report.implied_sum_alpha_sq = -2.0 * std::log(std::abs(report.dressed_hopping) / std::abs(config.j_hop));

    double self1 = 0.0;
    double self2 = 0.0;
    for (std::size_t k = 0; k < config.modes(); ++k) {
        self1 += std::norm(config.g1[k]) / config.mode_freqs[k];
        self2 += std::norm(config.g2[k]) / config.mode_freqs[k];
    }
    report.site_shift[0] = h_prime(vac10, vac10).real() - config.epsilon;
    report.site_shift[1] = h_prime(vac01, vac01).real() - config.epsilon;
    report.expected_site_shift[0] = -self1;
    report.expected_site_shift[1] = -self2;
    report.pair_shift = h_prime(vac11, vac11).real() - 2.0 * config.epsilon;
    report.expected_pair_shift = -self1 - self2 - config.v12();

    // population of the top Fock level of any mode in e^{-S}|p, vac>
    const Matrix es_inv = es.adjoint();
    for (Eigen::Index col : {vac10, vac01, vac11}) {
        const Vector displaced = es_inv.col(col);
        const Eigen::Index sector = col / d;
        for (std::size_t k = 0; k < config.modes(); ++k) {
            const std::size_t stride = mode_stride(config, k);
            double weight = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                if (occupation(static_cast<std::size_t>(i), stride, config.n_max) == config.n_max)
                    weight += std::norm(displaced[sector * d + i]);
            }
            report.truncation_weight = std::max(report.truncation_weight, weight);
        }
    }
    report.conclusive = report.truncation_weight <= truncation_threshold;

    // smallest cutoff whose coherent-state tail e^{-|x|^2}|x|^{2n}/n! falls below the threshold
    double max_disp = 0.0;
    for (std::size_t k = 0; k < config.modes(); ++k) {
        const double x1 = std::norm(config.g1[k]) / (config.mode_freqs[k] * config.mode_freqs[k]);
        const double x2 = std::norm(config.g2[k]) / (config.mode_freqs[k] * config.mode_freqs[k]);
        const double x12 = std::norm(config.g1[k] + config.g2[k]) / (config.mode_freqs[k] * config.mode_freqs[k]);
        max_disp = std::max({max_disp, x1, x2, x12});
    }
    int n = 1;
    double tail = std::exp(-max_disp) * max_disp;
    while (tail > truncation_threshold && n < 200) {
        ++n;
        tail *= max_disp / n;
    }
    report.suggested_n_max = std::max(n, config.n_max);
    return report;
}

// ---------------------------------------------------------------------------
// states and propagation

FullState product_with_vacuum(const Eigen::Vector2cd& site_amplitudes, const TruncatedBathConfig& config) {
    const auto d = static_cast<Eigen::Index>(config.bath_dim());
    FullState state{Vector::Zero(2 * d)};
    state.amplitudes[0] = site_amplitudes[0];
    state.amplitudes[d] = site_amplitudes[1];
    return state;
}

Propagator::Propagator(const Matrix& hamiltonian) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (hamiltonian + hamiltonian.adjoint()));
    if (solver.info() != Eigen::Success) throw NumericalError("oracle: Hamiltonian eigendecomposition failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

FullState Propagator::step(const FullState& state, double dt) const {
    Vector coeffs = vectors_.adjoint() * state.amplitudes;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::exp(cd(0.0, -energies_[i] * dt));
    return {vectors_ * coeffs};
}

Matrix Propagator::unitary(double dt) const {
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index i = 0; i < energies_.size(); ++i) phases[i] = std::exp(cd(0.0, -energies_[i] * dt));
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

FullState evolve_exact(const FullState& state, const Propagator& propagator, double dt) {
    return propagator.step(state, dt);
}

FullState apply_pulse(const FullState& state, std::size_t bath_dim) {
    const auto d = static_cast<Eigen::Index>(bath_dim);
    if (state.amplitudes.size() != 2 * d)
        throw ConfigError(fmt::format("pulse: state of size {} is not in the single-particle sector of dimension {}",
                                      state.amplitudes.size(), 2 * d));
    FullState out{Vector(2 * d)};
    out.amplitudes.head(d) = state.amplitudes.tail(d);
    out.amplitudes.tail(d) = state.amplitudes.head(d);
    return out;
}

Matrix pulse_operator(const TruncatedBathConfig& config) {
    const auto d = static_cast<Eigen::Index>(config.bath_dim());
    Matrix p = Matrix::Zero(2 * d, 2 * d);
    p.block(0, d, d, d) = Matrix::Identity(d, d);
    p.block(d, 0, d, d) = Matrix::Identity(d, d);
    return p;
}

Eigen::Matrix2cd reduced_site_matrix(const FullState& state, std::size_t bath_dim) {
    const auto d = static_cast<Eigen::Index>(bath_dim);
    Eigen::Matrix2cd rho;
    const auto first = state.amplitudes.head(d);
    const auto second = state.amplitudes.tail(d);
    rho(0, 0) = first.squaredNorm();
    rho(1, 1) = second.squaredNorm();
    rho(0, 1) = second.dot(first);  // sum_b psi_1b conj(psi_2b)
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

namespace {

// columns |S>, |T> in the site basis
Eigen::Matrix2cd st_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd w;
    w << r, r, -r, r;
    return w;
}

// Eigen-decomposition of rho0 into weighted site-basis vectors.
std::vector<std::pair<double, Eigen::Vector2cd>> purifications(const dynamics::DensityMatrixST& rho0) {
    rho0.validate();
    const Eigen::Matrix2cd site = st_to_site(rho0.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(site);
    std::vector<std::pair<double, Eigen::Vector2cd>> out;
    for (int i = 1; i >= 0; --i) {
        const double p = solver.eigenvalues()[i];
        if (p > 1e-15) out.emplace_back(p, solver.eigenvectors().col(i));
    }
    return out;
}

Eigen::Matrix2cd bare_system_evolution(const TruncatedBathConfig& config, const Eigen::Matrix2cd& rho_site, double t) {
    // e^{-i H_S t} with H_S = eps 1 + J sigma_x; the global phase cancels
    const double c = std::cos(config.j_hop * t);
    const double s = std::sin(config.j_hop * t);
    Eigen::Matrix2cd u;
    u << c, cd(0.0, -s), cd(0.0, -s), c;
    return u * rho_site * u.adjoint();
}

} // namespace

Eigen::Matrix2cd site_to_st(const Eigen::Matrix2cd& site) {
    const Eigen::Matrix2cd w = st_basis();
    return w.adjoint() * site * w;
}

Eigen::Matrix2cd st_to_site(const Eigen::Matrix2cd& st) {
    const Eigen::Matrix2cd w = st_basis();
    return w * st * w.adjoint();
}

// ---------------------------------------------------------------------------
// bang-bang

void PulseSchedule::validate() const {
    if (cycles < 1) throw ConfigError(fmt::format("pulse cycles must be >= 1 (got {})", cycles));
    if (!(total_time > 0.0) || !std::isfinite(total_time))
        throw ConfigError(fmt::format("pulse total time must be > 0 (got {})", total_time));
}

namespace {

BangBangPoint run_bangbang_with(const TruncatedBathConfig& config, const Propagator& propagator,
                                const dynamics::DensityMatrixST& rho0, const PulseSchedule& schedule) {
    schedule.validate();
    const std::size_t d = config.bath_dim();
    const double dt = schedule.delta_t();
    const Matrix u_dt = propagator.unitary(dt);

    Eigen::Matrix2cd pulsed = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd free = Eigen::Matrix2cd::Zero();
    for (const auto& [weight, site_vec] : purifications(rho0)) {
        FullState psi = product_with_vacuum(site_vec, config);
        for (int n = 0; n < schedule.cycles; ++n) {
            psi = apply_pulse(psi, d);
            psi.amplitudes = u_dt * psi.amplitudes;
            psi = apply_pulse(psi, d);
            psi.amplitudes = u_dt * psi.amplitudes;
        }
        const double norm_error = std::abs(psi.norm() - 1.0);
        if (norm_error > 1e-9)
            throw InvariantViolation(fmt::format("bang-bang: norm drift {:.3g} after {} cycles", norm_error, schedule.cycles),
                                     schedule.total_time);
        pulsed += weight * reduced_site_matrix(psi, d);

        const FullState unpulsed = propagator.step(product_with_vacuum(site_vec, config), schedule.total_time);
        free += weight * reduced_site_matrix(unpulsed, d);
    }

    const Eigen::Matrix2cd reference = bare_system_evolution(config, st_to_site(rho0.matrix()), schedule.total_time);
    return {dt, schedule.cycles, dynamics::trace_distance(pulsed, reference), dynamics::trace_distance(free, reference)};
}

} // namespace

BangBangPoint run_bangbang(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                           const PulseSchedule& schedule) {
    const Propagator propagator(build_hamiltonian(config));
    return run_bangbang_with(config, propagator, rho0, schedule);
}

std::pair<double, double> fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("log-log fit needs at least two matching points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw NumericalError(fmt::format("log-log fit: non-positive value at point {} ({}, {})", i, x[i], y[i]));
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

BangBangReport run_bangbang_scan(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                                 double total_time, const std::vector<int>& cycles, unsigned jobs) {
    if (cycles.empty()) throw ConfigError("bang-bang scan needs at least one cycle count");
    const Propagator propagator(build_hamiltonian(config));
    BangBangReport report;
    report.points.resize(cycles.size());
    numerics::parallel_for(cycles.size(), jobs, [&](std::size_t i) {
        report.points[i] = run_bangbang_with(config, propagator, rho0, PulseSchedule{total_time, cycles[i]});
    });
    if (report.points.size() >= 2) {
        std::vector<double> x, y;
        for (const auto& p : report.points) {
            x.push_back(p.delta_t);
            y.push_back(p.trace_distance_pulsed);
        }
        std::tie(report.fitted_slope, report.fitted_log_prefactor) = fit_log_log(x, y);
    }
    return report;
}

// ---------------------------------------------------------------------------
// pulse-free reference and master-equation comparison

ReferenceResult exact_decoherence_reference(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                                            const numerics::TimeGrid& grid, Frame frame) {
    config.validate();
    const std::size_t d = config.bath_dim();
    Matrix h = build_hamiltonian(config);
    if (frame == Frame::polaron) {
        const Matrix es = exp_anti_hermitian(single_particle_block(lang_firsov_generator(config), config));
        h = es * h * es.adjoint();
    }
    const Matrix u_dt = Propagator(h).unitary(grid.dt());

    std::vector<Eigen::Matrix2cd> reduced(grid.size(), Eigen::Matrix2cd::Zero());
    for (const auto& [weight, site_vec] : purifications(rho0)) {
        FullState psi = product_with_vacuum(site_vec, config);
        reduced[0] += weight * reduced_site_matrix(psi, d);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            psi.amplitudes = u_dt * psi.amplitudes;
            reduced[k] += weight * reduced_site_matrix(psi, d);
        }
        const double norm_error = std::abs(psi.norm() - 1.0);
        if (norm_error > 1e-9)
            throw InvariantViolation(fmt::format("exact reference: norm drift {:.3g}", norm_error), grid.t_max());
    }

    ReferenceResult result{dynamics::Trajectory{grid, {}, {}, {}, true, 0.0},
                           config.effective_hopping() / config.min_gap()};
    auto& traj = result.trajectory;
    traj.states.reserve(grid.size());
    for (const auto& r : reduced) traj.states.push_back(dynamics::DensityMatrixST::from_matrix(site_to_st(r)));
    const double c0 = std::abs(traj.states.front().rho_st);
    traj.coherence_normalized = c0 > 0.0;
    for (const auto& s : traj.states) traj.coherence.push_back(std::abs(s.rho_st) / (c0 > 0.0 ? c0 : 1.0));
    traj.pop_diff = dynamics::population_difference(traj);
    return result;
}

ComparisonReport compare_with_master_equation(const TruncatedBathConfig& config, const dynamics::DensityMatrixST& rho0,
                                              const numerics::TimeGrid& grid) {
    ComparisonReport report{exact_decoherence_reference(config, rho0, grid, Frame::polaron),
                            dynamics::Trajectory{grid, {}, {}, {}, true, 0.0}, 0.0, 0.0};
    const auto alpha_sq = config.alpha_sq();
    const auto kernels = bath::build_discrete_kernel_table(config.mode_freqs, alpha_sq, grid);
    const auto rate_table = rates::build_rate_table(kernels, config.effective_hopping(), grid);
    report.master = dynamics::evolve_closed_form(rho0, rate_table);

    double sum_sq = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double diff = std::abs(report.oracle.trajectory.coherence[k] - report.master.coherence[k]);
        sum_sq += diff * diff;
        report.max_coherence_difference = std::max(report.max_coherence_difference, diff);
    }
    report.rms_coherence_difference = std::sqrt(sum_sq / static_cast<double>(grid.size()));
    return report;
}

void write_bangbang_csv(std::ostream& out, const BangBangReport& report, const std::string& config_echo) {
    out << "# " << config_echo << '\n';
    output::CsvWriter csv(out, {"delta_t", "n_cycles", "trace_distance_pulsed", "trace_distance_free", "fitted_slope"});
    for (const auto& p : report.points)
        csv.row({p.delta_t, static_cast<double>(p.n_cycles), p.trace_distance_pulsed, p.trace_distance_free,
                 report.fitted_slope});
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report, const std::string& config_echo) {
    out << "# " << config_echo << '\n';
    out << "# jtilde_over_gap=" << output::format_number(report.oracle.jtilde_over_gap)
        << " rms=" << output::format_number(report.rms_coherence_difference)
        << " max=" << output::format_number(report.max_coherence_difference) << '\n';
    output::CsvWriter csv(out, {"t", "C_oracle", "C_master", "abs_diff"});
    const auto& grid = report.master.grid;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double a = report.oracle.trajectory.coherence[k];
        const double b = report.master.coherence[k];
        csv.row({grid[k], a, b, std::abs(a - b)});
    }
}

} // namespace polaron::oracle
