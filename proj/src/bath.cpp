// bath.cpp — kernel quadratures and the Dawson closed form for the dressed hopping

#include "polaron/bath.hpp"

#include <cmath>

#include <fmt/format.h>

#include "polaron/errors.hpp"

namespace polaron::bath {

void BathModel::validate() const {
    if (!(lambda_g >= 0.0) || !std::isfinite(lambda_g))
        throw ConfigError(fmt::format("lambda must be >= 0 (got {})", lambda_g));
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError(fmt::format("s must be >= 0 (got {})", s));
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw ConfigError(fmt::format("omega_c must be > 0 (got {})", omega_c));
    if (!(geometry_factor > 0.0) || !std::isfinite(geometry_factor))
        throw ConfigError(fmt::format("geometry_factor must be > 0 (got {})", geometry_factor));
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

namespace {

// Both kernels share the integrand x e^{-x^2} (1 - sinc(x Omega s)); only the
// oscillating factor differs.
template <class Trig>
double kernel_quadrature(double tau, const BathModel& model, const numerics::QuadratureSpec& spec, Trig trig) {
    model.validate();
    if (tau < 0.0) throw ConfigError(fmt::format("kernel evaluated at negative tau = {}", tau));
    if (model.s == 0.0 || model.coupling() == 0.0) return 0.0;

    const double scaled_s = model.omega_c * model.s;
    const double scaled_tau = model.omega_c * tau;
    auto integrand = [&](double x) {
        return x * std::exp(-x * x) * (1.0 - sinc(x * scaled_s)) * trig(x * scaled_tau);
    };
    const auto result = numerics::integrate_semiinf(integrand, spec);
    return 2.0 * model.coupling() * model.omega_c * model.omega_c * result.value;
}

} // namespace

double kernel_cos(double tau, const BathModel& model, const numerics::QuadratureSpec& spec) {
    return kernel_quadrature(tau, model, spec, [](double v) { return std::cos(v); });
}

double kernel_sin(double tau, const BathModel& model, const numerics::QuadratureSpec& spec) {
    if (tau == 0.0) {
        model.validate();
        return 0.0;
    }
    return kernel_quadrature(tau, model, spec, [](double v) { return std::sin(v); });
}

double kernel_zero(const BathModel& model) {
    model.validate();
    if (model.s == 0.0 || model.coupling() == 0.0) return 0.0;
    const double z = model.omega_c * model.s;
    // F[z]/z -> 1/2 as z -> 0; use the series to avoid cancellation for tiny z
    const double f_over_z = z < 1e-4 ? 0.5 - z * z / 12.0 : numerics::dawson_sine(z) / z;
    return 2.0 * model.coupling() * model.omega_c * model.omega_c * (0.5 - f_over_z);
}

double effective_hopping_ratio(const BathModel& model) { return std::exp(-0.5 * kernel_zero(model)); }

KernelTable build_kernel_table(const BathModel& model, const numerics::TimeGrid& grid,
                               const numerics::QuadratureSpec& spec, unsigned jobs) {
    model.validate();
    spec.validate();
    KernelTable table{grid, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
    if (model.s == 0.0 || model.coupling() == 0.0) return table;

    numerics::parallel_for(grid.size(), jobs, [&](std::size_t k) {
        const double tau = grid[k];
        try {
            table.k_cos[k] = kernel_cos(tau, model, spec);
            table.k_sin[k] = kernel_sin(tau, model, spec);
        } catch (const NumericalError& e) {
            throw NumericalError(fmt::format("kernel table at tau = {}: {}", tau, e.what()));
        }
    });
    return table;
}

KernelTable build_discrete_kernel_table(std::span<const double> mode_freqs, std::span<const double> alpha_sq,
                                        const numerics::TimeGrid& grid) {
    if (mode_freqs.size() != alpha_sq.size())
        throw ConfigError(fmt::format("{} mode frequencies but {} mode weights", mode_freqs.size(), alpha_sq.size()));
    KernelTable table{grid, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double c = 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < mode_freqs.size(); ++j) {
            c += alpha_sq[j] * std::cos(mode_freqs[j] * grid[k]);
            s += alpha_sq[j] * std::sin(mode_freqs[j] * grid[k]);
        }
        table.k_cos[k] = c;
        table.k_sin[k] = s;
    }
    return table;
}

} // namespace polaron::bath
