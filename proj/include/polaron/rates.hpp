// rates.hpp — time-local decoherence rates gamma_+/-, beta and the composite Gamma_0,1,2

#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "polaron/bath.hpp"
#include "polaron/numerics.hpp"

namespace polaron::rates {

enum class Rate {
    gamma_plus,
    gamma_minus,
    beta,
    cap_gamma0,
    cap_gamma1,
    cap_gamma2,
    cum_gamma0,
    cum_gamma1,
    cum_gamma2,
};

// All rates share one grid. Composite rates are stored, not derived on read:
//   Gamma_0 = (2 gamma_+ - gamma_-)/2,  Gamma_1 = 2 gamma_+ + gamma_-,  Gamma_2 = 4 gamma_+
// and cum_gamma_i is the trapezoid integral of Gamma_i from 0 to t.
struct RateTable {
    numerics::TimeGrid grid;
    double j_tilde{0.0};
    std::vector<double> gamma_plus;
    std::vector<double> gamma_minus;
    std::vector<double> beta;
    std::vector<double> cap_gamma0;
    std::vector<double> cap_gamma1;
    std::vector<double> cap_gamma2;
    std::vector<double> cum_gamma0;
    std::vector<double> cum_gamma1;
    std::vector<double> cum_gamma2;

    const std::vector<double>& series(Rate which) const;
};

// gamma_+/-(t) = 2 J~^2 int_0^t du [exp(+/-K_c(u)) cos K_s(u) - 1]
// beta(t)      = 2 J~^2 int_0^t du  exp(K_c(u)) sin K_s(u)
// Each is a single cumulative trapezoid over u = t - tau.
// Throws NumericalError if the kernel table lives on a different grid.
RateTable build_rate_table(const bath::KernelTable& kernels, double j_tilde, const numerics::TimeGrid& grid);

struct RateOptions {
    numerics::QuadratureSpec quadrature{};
    unsigned jobs{0};
};

// Builds the kernel table from the model and uses J~ = j_hop * effective_hopping_ratio(model).
RateTable build_rate_table(const bath::BathModel& model, double j_hop, const numerics::TimeGrid& grid,
                           const RateOptions& options = {});

// Linear interpolation between neighbouring grid points; exact at grid points.
// Throws ConfigError for t outside [0, t_max].
double rate_at(const RateTable& table, double t, Rate which);

// Soft check gamma_+ >= gamma_-: cos K_s may change sign, so violations are
// counted and reported rather than treated as errors.
struct OrderingReport {
    std::size_t violations{0};
    std::optional<double> first_time;
    double worst_gap{0.0};  // most negative gamma_+ - gamma_-
};
OrderingReport check_gamma_ordering(const RateTable& table, double tolerance = 0.0);

// Debug dump: t, gamma_plus, gamma_minus, beta, cum_gamma0, cum_gamma1, cum_gamma2.
void write_rate_csv(std::ostream& out, const RateTable& table);

} // namespace polaron::rates
