// numerics.hpp — Dawson function, semi-infinite quadrature, cumulative trapezoid, RK4

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace polaron::numerics {

struct QuadratureSpec {
    double rel_tol{1e-12};
    double abs_tol{1e-14};
    int max_subdivisions{4000};

    void validate() const;
};

struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
    int subdivisions{0};
};

// Uniform time grid 0 = t_0 < ... < t_n = t_max. The last point is t_max exactly;
// t_max / dt must be an integer up to rounding.
class TimeGrid {
public:
    TimeGrid(double t_max, double dt);

    double t_max() const noexcept { return t_max_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    std::span<const double> points() const noexcept { return points_; }

    // Index of the interval [t_k, t_{k+1}] containing t, clamped to the last interval.
    std::size_t interval_index(double t) const;

    bool operator==(const TimeGrid& other) const noexcept {
        return size() == other.size() && dt_ == other.dt_ && t_max_ == other.t_max_;
    }

private:
    double t_max_;
    double dt_;
    std::vector<double> points_;
};

// Standard Dawson function D(x) = exp(-x^2) * int_0^x exp(t^2) dt.
double dawson(double x);

// F[z] = int_0^inf exp(-t^2) sin(z t) dt, which equals D(z/2). Odd in z.
double dawson_sine(double z);

// Integral of f over [0, upper] by global adaptive Gauss-Legendre panels.
// Intended for integrands carrying a Gaussian factor exp(-x^2), for which
// truncation at upper = 8 leaves a tail below 2e-28.
// Throws NumericalError when max_subdivisions is exhausted.
QuadratureResult integrate_semiinf(const std::function<double(double)>& f,
                                   const QuadratureSpec& spec = {},
                                   double upper = 8.0);

// General finite-interval variant of the same adaptive scheme.
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec = {});

// out[0] = 0; out[k] = trapezoid rule over the first k intervals of the grid.
std::vector<double> cumulative_trapezoid(std::span<const double> samples, const TimeGrid& grid);

// One classical fourth-order Runge-Kutta step of dx/dt = f(t, x).
// State must support addition and multiplication by double (Eigen vectors, complex scalars).
template <class State, class Derivative>
State rk4_step(const State& x, Derivative&& f, double t, double dt) {
    const double half = 0.5 * dt;
    const State k1 = f(t, x);
    const State k2 = f(t + half, State(x + half * k1));
    const State k3 = f(t + half, State(x + half * k2));
    const State k4 = f(t + dt, State(x + dt * k3));
    return State(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Distribute `count` independent tasks over `jobs` threads (0 = hardware concurrency).
// Each index is visited exactly once; exceptions are rethrown for the lowest failing index.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task);

unsigned resolve_jobs(unsigned jobs);

} // namespace polaron::numerics
