// numerics.cpp — special functions and quadrature primitives

#include "polaron/numerics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <queue>
#include <thread>

#include <fmt/format.h>

#include "polaron/errors.hpp"

namespace polaron::numerics {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw ConfigError(fmt::format("quadrature rel_tol must be > 0 (got {})", rel_tol));
    if (!(abs_tol >= 0.0)) throw ConfigError(fmt::format("quadrature abs_tol must be >= 0 (got {})", abs_tol));
    if (max_subdivisions < 1)
        throw ConfigError(fmt::format("quadrature max_subdivisions must be >= 1 (got {})", max_subdivisions));
}

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid::TimeGrid(double t_max, double dt) : t_max_(t_max), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError(fmt::format("time step dt must be > 0 (got {})", dt));
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw ConfigError(fmt::format("t_max must be > 0 (got {})", t_max));
    const double ratio = t_max / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError(fmt::format("t_max = {} is not an integer multiple of dt = {}", t_max, dt));
    const auto n = static_cast<std::size_t>(steps);
    points_.resize(n + 1);
    for (std::size_t k = 0; k < n; ++k) points_[k] = static_cast<double>(k) * dt;
    points_[n] = t_max;
}

std::size_t TimeGrid::interval_index(double t) const {
    const std::size_t last = points_.size() - 2;
    if (t <= 0.0) return 0;
    auto k = static_cast<std::size_t>(t / dt_);
    k = std::min(k, last);
    // guard against rounding in t / dt near a grid point
    while (k > 0 && points_[k] > t) --k;
    while (k < last && points_[k + 1] <= t) ++k;
    return k;
}

// ---------------------------------------------------------------------------
// Dawson function

namespace {

double dawson_maclaurin(double x) {
    // sum_n (-1)^n 2^n x^(2n+1) / (2n+1)!!
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double dawson_positive_series(double x) {
    // exp(-x^2) * sum_n x^(2n+1) / (n! (2n+1)); every term positive, no cancellation
    const double x2 = x * x;
    double a = x;
    double sum = x;
    for (int n = 1; n < 1000; ++n) {
        a *= x2 / n;
        const double term = a / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(-x2) * sum;
}

double dawson_asymptotic(double x) {
    // 1/(2x) * sum_k (2k-1)!! / (2x^2)^k, truncated at the smallest term
    const double inv = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        const double next = term * (2.0 * k - 1.0) * inv;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / (2.0 * x);
}

} // namespace

double dawson(double x) {
    if (x < 0.0) return -dawson(-x);
    if (x <= 1.0) return dawson_maclaurin(x);
    if (x < 6.0) return dawson_positive_series(x);
    return dawson_asymptotic(x);
}

double dawson_sine(double z) { return dawson(0.5 * z); }

// ---------------------------------------------------------------------------
// Adaptive Gauss-Legendre quadrature

namespace {

template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre() {
        for (std::size_t i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (std::size_t k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    double apply(const std::function<double(double)>& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return half * sum;
    }
};

const GaussLegendre<10>& coarse_rule() {
    static const GaussLegendre<10> rule;
    return rule;
}

const GaussLegendre<20>& fine_rule() {
    static const GaussLegendre<20> rule;
    return rule;
}

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double fine = fine_rule().apply(f, a, b);
    const double coarse = coarse_rule().apply(f, a, b);
    return {a, b, fine, std::abs(fine - coarse)};
}

constexpr int initial_panels = 16;

} // namespace

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return {};

    std::priority_queue<Panel> queue;
    const double width = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
        queue.push(evaluate_panel(f, lo, hi));
    }
    int subdivisions = initial_panels;

    auto totals = [&queue]() {
        // deterministic order: copy and sort by left endpoint before summing
        auto copy = queue;
        std::vector<Panel> panels;
        panels.reserve(copy.size());
        while (!copy.empty()) {
            panels.push_back(copy.top());
            copy.pop();
        }
        std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        double value = 0.0;
        double error = 0.0;
        for (const auto& p : panels) {
            value += p.value;
            error += p.error;
        }
        return std::pair{value, error};
    };

    double value = 0.0;
    double error = 0.0;
    {
        auto copy = queue;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    }

    for (;;) {
        if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
            const auto [v, e] = totals();
            if (e <= std::max(spec.abs_tol, spec.rel_tol * std::abs(v))) return {v, e, subdivisions};
            value = v;
            error = e;
        }
        if (subdivisions >= spec.max_subdivisions) {
            const auto [v, e] = totals();
            throw NumericalError(fmt::format(
                "adaptive quadrature did not converge on [{}, {}]: {} subdivisions, value {:.12g}, "
                "error estimate {:.3g}",
                a, b, subdivisions, v, e));
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = evaluate_panel(f, worst.a, mid);
        const Panel right = evaluate_panel(f, mid, worst.b);
        queue.push(left);
        queue.push(right);
        ++subdivisions;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
    }
}

QuadratureResult integrate_semiinf(const std::function<double(double)>& f, const QuadratureSpec& spec,
                                   double upper) {
    if (!(upper > 0.0)) throw ConfigError("semi-infinite truncation point must be > 0");
    return integrate_interval(f, 0.0, upper, spec);
}

// ---------------------------------------------------------------------------

std::vector<double> cumulative_trapezoid(std::span<const double> samples, const TimeGrid& grid) {
    if (samples.size() != grid.size())
        throw NumericalError(fmt::format("cumulative_trapezoid: {} samples for a grid of {} points",
                                         samples.size(), grid.size()));
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double h = grid[k] - grid[k - 1];
        out[k] = out[k - 1] + 0.5 * h * (samples[k - 1] + samples[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------

unsigned resolve_jobs(unsigned jobs) {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_jobs(jobs), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace polaron::numerics
