// bath.hpp — Ohmic bath with Gaussian cutoff: correlation kernels and dressed hopping

#pragma once

#include <span>
#include <vector>

#include "polaron/numerics.hpp"

namespace polaron::bath {

// Spectral model |g(w)|^2 ~ w exp(-w^2/Omega^2) seen through the two-site form factor
// (1 - sin(w s)/(w s)). lambda_g absorbs alpha, the phonon speed and the angular prefactor;
// geometry_factor rescales it to recover either prefactor convention.
struct BathModel {
    double lambda_g{1.0};
    double omega_c{1.0};
    double s{1.0};
    double geometry_factor{1.0};

    void validate() const;

    // lambda_g * geometry_factor
    double coupling() const noexcept { return lambda_g * geometry_factor; }
};

// Correlation kernels tabulated on a time grid:
//   k_cos[k] = K_c(t_k) = sum_k |alpha_k|^2 cos(w_k t)
//   k_sin[k] = K_s(t_k) = sum_k |alpha_k|^2 sin(w_k t)
struct KernelTable {
    numerics::TimeGrid grid;
    std::vector<double> k_cos;
    std::vector<double> k_sin;
};

// sin(x)/x with a series branch for |x| < 1e-4.
double sinc(double x);

// K_c(tau) = 2 c Omega^2 int_0^inf dx x e^{-x^2} (1 - sinc(x Omega s)) cos(x Omega tau), c = coupling().
double kernel_cos(double tau, const BathModel& model, const numerics::QuadratureSpec& spec = {});

// Same with sin(x Omega tau); K_s(0) = 0.
double kernel_sin(double tau, const BathModel& model, const numerics::QuadratureSpec& spec = {});

// Closed form of K_c(0) = 2 c Omega^2 (1/2 - F[Omega s] / (Omega s)); equals sum_k |alpha_k|^2.
double kernel_zero(const BathModel& model);

// J~/J = exp(-c Omega^2 (1/2 - F[Omega s]/(Omega s))) = exp(-K_c(0)/2).
double effective_hopping_ratio(const BathModel& model);

// Pointwise quadrature of both kernels at every grid point, parallel over points.
// A quadrature failure is rethrown as NumericalError naming the offending tau.
KernelTable build_kernel_table(const BathModel& model, const numerics::TimeGrid& grid,
                               const numerics::QuadratureSpec& spec = {}, unsigned jobs = 0);

// Kernels of a finite mode set: K_c(t) = sum_j alpha_sq[j] cos(w_j t), K_s likewise with sin.
KernelTable build_discrete_kernel_table(std::span<const double> mode_freqs, std::span<const double> alpha_sq,
                                        const numerics::TimeGrid& grid);

} // namespace polaron::bath
