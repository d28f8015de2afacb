// rates.cpp — cumulative construction of the decoherence rates

#include "polaron/rates.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "polaron/errors.hpp"
#include "polaron/output.hpp"

namespace polaron::rates {

const std::vector<double>& RateTable::series(Rate which) const {
    switch (which) {
    case Rate::gamma_plus: return gamma_plus;
    case Rate::gamma_minus: return gamma_minus;
    case Rate::beta: return beta;
    case Rate::cap_gamma0: return cap_gamma0;
    case Rate::cap_gamma1: return cap_gamma1;
    case Rate::cap_gamma2: return cap_gamma2;
    case Rate::cum_gamma0: return cum_gamma0;
    case Rate::cum_gamma1: return cum_gamma1;
    case Rate::cum_gamma2: return cum_gamma2;
    }
    throw ConfigError("unknown rate selector");
}

RateTable build_rate_table(const bath::KernelTable& kernels, double j_tilde, const numerics::TimeGrid& grid) {
    if (!(kernels.grid == grid) || kernels.k_cos.size() != grid.size() || kernels.k_sin.size() != grid.size())
        throw NumericalError(fmt::format("kernel table grid ({} points, dt {}) does not match rate grid ({} points, dt {})",
                                         kernels.grid.size(), kernels.grid.dt(), grid.size(), grid.dt()));
    if (!(j_tilde >= 0.0) || !std::isfinite(j_tilde))
        throw ConfigError(fmt::format("effective hopping must be finite and >= 0 (got {})", j_tilde));

    const std::size_t n = grid.size();
    std::vector<double> f_plus(n), f_minus(n), f_beta(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kc = kernels.k_cos[k];
        const double ks = kernels.k_sin[k];
        f_plus[k] = std::exp(kc) * std::cos(ks) - 1.0;
        f_minus[k] = std::exp(-kc) * std::cos(ks) - 1.0;
        f_beta[k] = std::exp(kc) * std::sin(ks);
    }

    const double prefactor = 2.0 * j_tilde * j_tilde;
    auto scaled_cumulative = [&](const std::vector<double>& f) {
        auto out = numerics::cumulative_trapezoid(f, grid);
        for (auto& v : out) v *= prefactor;
        return out;
    };

    RateTable table{grid, j_tilde, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    table.gamma_plus = scaled_cumulative(f_plus);
    table.gamma_minus = scaled_cumulative(f_minus);
    table.beta = scaled_cumulative(f_beta);

    table.cap_gamma0.resize(n);
    table.cap_gamma1.resize(n);
    table.cap_gamma2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double gp = table.gamma_plus[k];
        const double gm = table.gamma_minus[k];
        table.cap_gamma0[k] = (2.0 * gp - gm) / 2.0;
        table.cap_gamma1[k] = 2.0 * gp + gm;
        table.cap_gamma2[k] = 4.0 * gp;
    }
    table.cum_gamma0 = numerics::cumulative_trapezoid(table.cap_gamma0, grid);
    table.cum_gamma1 = numerics::cumulative_trapezoid(table.cap_gamma1, grid);
    table.cum_gamma2 = numerics::cumulative_trapezoid(table.cap_gamma2, grid);
    return table;
}

RateTable build_rate_table(const bath::BathModel& model, double j_hop, const numerics::TimeGrid& grid,
                           const RateOptions& options) {
    if (!(j_hop >= 0.0) || !std::isfinite(j_hop)) throw ConfigError(fmt::format("J must be >= 0 (got {})", j_hop));
    const auto kernels = bath::build_kernel_table(model, grid, options.quadrature, options.jobs);
    return build_rate_table(kernels, j_hop * bath::effective_hopping_ratio(model), grid);
}

double rate_at(const RateTable& table, double t, Rate which) {
    const auto& grid = table.grid;
    if (!(t >= 0.0) || t > grid.t_max())
        throw ConfigError(fmt::format("rate requested at t = {} outside [0, {}]", t, grid.t_max()));
    const auto& values = table.series(which);
    const std::size_t k = grid.interval_index(t);
    const double t0 = grid[k];
    const double t1 = grid[k + 1];
    if (t == t0) return values[k];
    if (t == t1) return values[k + 1];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * values[k] + w * values[k + 1];
}

OrderingReport check_gamma_ordering(const RateTable& table, double tolerance) {
    OrderingReport report;
    for (std::size_t k = 0; k < table.grid.size(); ++k) {
        const double gap = table.gamma_plus[k] - table.gamma_minus[k];
        if (gap < -tolerance) {
            ++report.violations;
            if (!report.first_time) report.first_time = table.grid[k];
        }
        report.worst_gap = std::min(report.worst_gap, gap);
    }
    return report;
}

void write_rate_csv(std::ostream& out, const RateTable& table) {
    output::CsvWriter csv(out, {"t", "gamma_plus", "gamma_minus", "beta", "cum_gamma0", "cum_gamma1", "cum_gamma2"});
    for (std::size_t k = 0; k < table.grid.size(); ++k) {
        csv.row({table.grid[k], table.gamma_plus[k], table.gamma_minus[k], table.beta[k], table.cum_gamma0[k],
                 table.cum_gamma1[k], table.cum_gamma2[k]});
    }
}

} // namespace polaron::rates
