// config.cpp — key table, parsing and echo of ExperimentConfig

#include "polaron/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "polaron/errors.hpp"

namespace polaron::config {

namespace {

struct BadValue {
    std::string reason;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw BadValue{fmt::format("'{}' is not a number", text)};
    if (!std::isfinite(value)) throw BadValue{fmt::format("'{}' is not finite", text)};
    return value;
}

long long to_integer(std::string_view text) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw BadValue{fmt::format("'{}' is not an integer", text)};
    return value;
}

bool to_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw BadValue{fmt::format("'{}' is not a boolean", text)};
}

template <typename T, typename Convert>
std::vector<T> to_list(std::string_view text, Convert convert) {
    std::vector<T> out;
    text = trim(text);
    if (text.empty()) throw BadValue{"empty list"};
    while (true) {
        const auto comma = text.find(',');
        out.push_back(static_cast<T>(convert(text.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return out;
}

std::string show(double v) { return fmt::format("{}", v); }

template <typename T>
std::string show_list(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + fmt::format("{}", values[i]);
    return out;
}

struct KeyHandler {
    std::string key;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;  // empty: not echoed
};

#define POLARON_DOUBLE_KEY(name, member)                                                           \
    KeyHandler {                                                                                   \
        name, [](ExperimentConfig& c, std::string_view v) { c.member = to_double(v); },             \
            [](const ExperimentConfig& c) { return show(c.member); }                               \
    }

#define POLARON_INT_KEY(name, member)                                                              \
    KeyHandler {                                                                                   \
        name, [](ExperimentConfig& c, std::string_view v) { c.member = static_cast<int>(to_integer(v)); }, \
            [](const ExperimentConfig& c) { return fmt::format("{}", c.member); }                  \
    }

const std::vector<KeyHandler>& handlers() {
    static const std::vector<KeyHandler> table = {
        {"mode",
         [](ExperimentConfig& c, std::string_view v) {
             const auto m = parse_mode(trim(v));
             if (!m) throw BadValue{fmt::format("unknown mode '{}'", trim(v))};
             c.mode = m;
         },
         [](const ExperimentConfig& c) { return c.mode ? std::string(mode_name(*c.mode)) : std::string(); }},
        POLARON_DOUBLE_KEY("lambda_g", bath.lambda_g),
        POLARON_DOUBLE_KEY("omega_c", bath.omega_c),
        POLARON_DOUBLE_KEY("s", bath.s),
        POLARON_DOUBLE_KEY("geometry_factor", bath.geometry_factor),
        POLARON_DOUBLE_KEY("j_hop", j_hop),
        POLARON_DOUBLE_KEY("t_max", t_max),
        POLARON_DOUBLE_KEY("dt", dt),
        POLARON_DOUBLE_KEY("rho_ss", rho_ss),
        POLARON_DOUBLE_KEY("re_rho_st", re_rho_st),
        POLARON_DOUBLE_KEY("im_rho_st", im_rho_st),
        {"s_values", [](ExperimentConfig& c, std::string_view v) { c.s_values = to_list<double>(v, to_double); },
         [](const ExperimentConfig& c) { return show_list(c.s_values); }},
        {"lambda_values",
         [](ExperimentConfig& c, std::string_view v) { c.lambda_values = to_list<double>(v, to_double); },
         [](const ExperimentConfig& c) { return show_list(c.lambda_values); }},
        POLARON_DOUBLE_KEY("hopping_lambda_max", hopping_lambda_max),
        POLARON_INT_KEY("hopping_lambda_points", hopping_lambda_points),
        POLARON_DOUBLE_KEY("hopping_s_max", hopping_s_max),
        POLARON_INT_KEY("hopping_s_points", hopping_s_points),
        {"out", [](ExperimentConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); }, {}},
        {"svg", [](ExperimentConfig& c, std::string_view v) { c.svg = to_bool(v); },
         [](const ExperimentConfig& c) { return std::string(c.svg ? "true" : "false"); }},
        {"jobs",
         [](ExperimentConfig& c, std::string_view v) {
             const auto n = to_integer(v);
             if (n < 0) throw BadValue{"must be >= 0"};
             c.jobs = static_cast<unsigned>(n);
         },
         {}},
        POLARON_INT_KEY("modes", modes),
        POLARON_INT_KEY("n_max", n_max),
        {"dim_cap",
         [](ExperimentConfig& c, std::string_view v) {
             const auto n = to_integer(v);
             if (n < 2) throw BadValue{"must be >= 2"};
             c.dim_cap = static_cast<std::size_t>(n);
         },
         [](const ExperimentConfig& c) { return fmt::format("{}", c.dim_cap); }},
        POLARON_DOUBLE_KEY("oracle_omega_max", oracle_omega_max),
        POLARON_DOUBLE_KEY("oracle_epsilon", oracle_epsilon),
        POLARON_DOUBLE_KEY("pulse_time", pulse_time),
        {"cycles",
         [](ExperimentConfig& c, std::string_view v) {
             c.cycles = to_list<int>(v, [](std::string_view x) { return to_integer(x); });
         },
         [](const ExperimentConfig& c) { return show_list(c.cycles); }},
        POLARON_DOUBLE_KEY("compare_t_max", compare_t_max),
        POLARON_DOUBLE_KEY("compare_dt", compare_dt),
        {"seed",
         [](ExperimentConfig& c, std::string_view v) {
             const auto n = to_integer(v);
             if (n < 0) throw BadValue{"must be >= 0"};
             c.seed = static_cast<std::uint64_t>(n);
         },
         [](const ExperimentConfig& c) { return fmt::format("{}", c.seed); }},
    };
    return table;
}

#undef POLARON_DOUBLE_KEY
#undef POLARON_INT_KEY

void apply(ExperimentConfig& config, std::string_view key, std::string_view value, const std::string& location) {
    for (const auto& h : handlers()) {
        if (h.key != key) continue;
        try {
            h.set(config, value);
        } catch (const BadValue& bad) {
            throw ConfigError(fmt::format("{}: invalid value for '{}': {}", location, key, bad.reason));
        }
        return;
    }
    throw ConfigError(fmt::format("{}: unknown key '{}'", location, key));
}

void require(bool ok, std::string_view key, const std::string& what) {
    if (!ok) throw ConfigError(fmt::format("invalid '{}': {}", key, what));
}

} // namespace

std::string_view mode_name(Mode mode) {
    switch (mode) {
    case Mode::single: return "single";
    case Mode::sweep_s: return "sweep-s";
    case Mode::sweep_lambda: return "sweep-lambda";
    case Mode::effective_hopping: return "effective-hopping";
    case Mode::bangbang: return "bangbang";
    case Mode::oracle_compare: return "oracle-compare";
    case Mode::selftest: return "selftest";
    }
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
    for (Mode m : {Mode::single, Mode::sweep_s, Mode::sweep_lambda, Mode::effective_hopping, Mode::bangbang,
                   Mode::oracle_compare, Mode::selftest}) {
        if (mode_name(m) == name) return m;
    }
    return std::nullopt;
}

dynamics::DensityMatrixST ExperimentConfig::initial_state() const {
    return {rho_ss, 1.0 - rho_ss, {re_rho_st, im_rho_st}};
}

void ExperimentConfig::validate() const {
    require(mode.has_value(), "mode", "missing required field (give a verb or `mode = ...`)");
    try {
        bath.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("invalid bath: {}", e.what()));
    }
    require(std::isfinite(j_hop), "j_hop", "must be finite");
    require(t_max > 0.0, "t_max", fmt::format("must be > 0 (got {})", t_max));
    require(dt > 0.0 && dt <= t_max, "dt", fmt::format("must be in (0, t_max] (got {})", dt));
    require(rho_ss >= 0.0 && rho_ss <= 1.0, "rho_ss", fmt::format("must lie in [0, 1] (got {})", rho_ss));
    const double bound = rho_ss * (1.0 - rho_ss);
    require(re_rho_st * re_rho_st + im_rho_st * im_rho_st <= bound + 1e-12, "re_rho_st",
            fmt::format("|rho_st|^2 = {} exceeds rho_ss * rho_tt = {} (state not positive)",
                        re_rho_st * re_rho_st + im_rho_st * im_rho_st, bound));
    require(!s_values.empty(), "s_values", "empty");
    for (double s : s_values) require(s >= 0.0, "s_values", fmt::format("entries must be >= 0 (got {})", s));
    require(!lambda_values.empty(), "lambda_values", "empty");
    for (double l : lambda_values) require(l >= 0.0, "lambda_values", fmt::format("entries must be >= 0 (got {})", l));
    require(hopping_lambda_max > 0.0, "hopping_lambda_max", "must be > 0");
    require(hopping_lambda_points >= 2, "hopping_lambda_points", "must be >= 2");
    require(hopping_s_max > 0.0, "hopping_s_max", "must be > 0");
    require(hopping_s_points >= 2, "hopping_s_points", "must be >= 2");
    require(modes >= 1, "modes", fmt::format("must be >= 1 (got {})", modes));
    require(n_max >= 1, "n_max", fmt::format("must be >= 1 (got {})", n_max));
    require(oracle_omega_max > 0.0, "oracle_omega_max", "must be > 0");
    require(pulse_time > 0.0, "pulse_time", "must be > 0");
    require(!cycles.empty(), "cycles", "empty");
    for (int n : cycles) require(n >= 1, "cycles", fmt::format("entries must be >= 1 (got {})", n));
    require(compare_t_max > 0.0, "compare_t_max", "must be > 0");
    require(compare_dt > 0.0 && compare_dt <= compare_t_max, "compare_dt", "must be in (0, compare_t_max]");
}

ExperimentConfig parse_config(std::string_view text, std::string_view source_name, const std::vector<Override>& overrides) {
    ExperimentConfig config;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string location = fmt::format("{}:{}", source_name, line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}: expected `key = value`, got '{}'", location, line));
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("{}: missing key before '='", location));
        apply(config, key, line.substr(eq + 1), location);
    }
    for (const auto& o : overrides) apply(config, o.key, o.value, o.flag.empty() ? "flag" : o.flag);
    config.validate();
    return config;
}

std::string echo_config(const ExperimentConfig& config) {
    std::string out = "# resolved configuration\n";
    for (const auto& h : handlers()) {
        if (!h.get) continue;
        const std::string value = h.get(config);
        if (value.empty()) continue;
        out += h.key + " = " + value + "\n";
    }
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& h : handlers()) k.push_back(h.key);
        return k;
    }();
    return keys;
}

} // namespace polaron::config
