// config.hpp — run configuration: flat `key = value` files, flag overrides, resolved echo

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polaron/bath.hpp"
#include "polaron/dynamics.hpp"

namespace polaron::config {

enum class Mode { single, sweep_s, sweep_lambda, effective_hopping, bangbang, oracle_compare, selftest };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct ExperimentConfig {
    std::optional<Mode> mode;

    bath::BathModel bath;
    double j_hop{1.0};
    double t_max{50.0};
    double dt{0.005};

    // initial state (rho_ss, Re rho_st, Im rho_st); rho_tt = 1 - rho_ss
    double rho_ss{2.0 / 3.0};
    double re_rho_st{0.47140452079103168};  // sqrt(2)/3
    double im_rho_st{0.0};

    // sweep-s and the per-s columns of fig1a
    std::vector<double> s_values{1.0, 10.0, 100.0};
    // sweep-lambda and the per-lambda columns of fig1b
    std::vector<double> lambda_values{0.5, 1.0, 2.0};
    // abscissae of the effective-hopping tables
    double hopping_lambda_max{2.0};
    int hopping_lambda_points{41};
    double hopping_s_max{20.0};
    int hopping_s_points{41};

    std::string out_dir;  // empty: current directory
    bool svg{false};
    unsigned jobs{0};

    // truncated-bath oracle
    int modes{2};
    int n_max{6};
    std::size_t dim_cap{4096};
    double oracle_omega_max{4.0};
    double oracle_epsilon{0.0};
    double pulse_time{2.0};
    std::vector<int> cycles{4, 8, 16, 32, 64};
    double compare_t_max{10.0};
    double compare_dt{0.01};

    std::uint64_t seed{7};

    dynamics::DensityMatrixST initial_state() const;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

// One command-line override; `flag` is used as the error location.
struct Override {
    std::string key;
    std::string value;
    std::string flag;
};

// Parses `key = value` lines (`#` starts a comment), then applies overrides in order.
// Unknown keys, malformed lines and invalid values raise ConfigError with the key and
// "<source>:<line>" or the flag name. The result is validated.
ExperimentConfig parse_config(std::string_view text, std::string_view source_name,
                              const std::vector<Override>& overrides = {});

// Every key with its resolved value, in a fixed order; parse_config(echo) reproduces the
// configuration exactly (numbers use shortest round-trip form). `out` and `jobs` are omitted.
std::string echo_config(const ExperimentConfig& config);

// Recognized keys in echo order.
const std::vector<std::string>& known_keys();

} // namespace polaron::config
