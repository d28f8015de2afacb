// errors.hpp — exception types shared by the library and mapped to CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

// Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Quadrature non-convergence, self-check failures, table mismatches (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physical state invariant (trace, positivity, normalization) was violated (exit code 4).
class InvariantViolation : public std::runtime_error {
public:
    InvariantViolation(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace polaron
