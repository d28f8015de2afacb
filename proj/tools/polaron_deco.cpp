// polaron_deco.cpp — command-line front end

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polaron/config.hpp"
#include "polaron/errors.hpp"
#include "polaron/experiment.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_invariant = 4;

int report_error(const char* kind, int code, const std::string& message, std::optional<double> time = std::nullopt) {
    nlohmann::json record{{"error", kind}, {"exit_code", code}, {"message", message}};
    if (time) record["time"] = *time;
    std::cerr << record.dump() << '\n';
    return code;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw polaron::ConfigError("cannot read config file '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

int main(int argc, char** argv) {
    using namespace polaron;

    CLI::App app{"Decoherence of a two-site polaron qubit: rates, master-equation dynamics and a truncated-bath oracle",
                 "polaron-deco"};
    std::string verb;
    std::string config_path;
    app.add_option("verb", verb, "single | sweep-s | sweep-lambda | effective-hopping | bangbang | oracle-compare | selftest");
    app.add_option("--config", config_path, "key = value configuration file");

    // flag -> config key, collected in a fixed order so overrides are reproducible
    struct FlagSpec {
        const char* flag;
        const char* key;
        const char* help;
    };
    const std::vector<FlagSpec> value_flags = {
        {"--out", "out", "output directory (default: $POLARON_DECO_OUT or .)"},
        {"--s", "s", "scattering time scale s"},
        {"--lambda", "lambda_g", "effective coupling lambda_g"},
        {"--j", "j_hop", "bare hopping J"},
        {"--tmax", "t_max", "final time"},
        {"--dt", "dt", "time step"},
        {"--jobs", "jobs", "worker threads (0 = all cores)"},
        {"--modes", "modes", "oracle bath modes"},
        {"--nmax", "n_max", "oracle Fock cutoff per mode"},
        {"--cycles", "cycles", "comma-separated pulse cycle counts"},
    };
    std::vector<std::string> values(value_flags.size());
    std::vector<CLI::Option*> options;
    for (std::size_t i = 0; i < value_flags.size(); ++i)
        options.push_back(app.add_option(value_flags[i].flag, values[i], value_flags[i].help));
    bool svg = false;
    auto* svg_flag = app.add_flag("--svg", svg, "also write SVG charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("config", exit_config, e.what());
    }

    try {
        std::vector<config::Override> overrides;
        if (!verb.empty()) overrides.push_back({"mode", verb, "verb"});
        for (std::size_t i = 0; i < value_flags.size(); ++i) {
            if (options[i]->count() > 0) overrides.push_back({value_flags[i].key, values[i], value_flags[i].flag});
        }
        if (svg_flag->count() > 0) overrides.push_back({"svg", svg ? "true" : "false", "--svg"});

        const std::string text = config_path.empty() ? std::string() : read_file(config_path);
        config::ExperimentConfig cfg = config::parse_config(text, config_path.empty() ? "<none>" : config_path, overrides);
        if (cfg.out_dir.empty()) {
            const char* env = std::getenv("POLARON_DECO_OUT");
            cfg.out_dir = (env && *env) ? env : ".";
        }

        const auto summary = experiment::run_experiment(cfg);
        for (const auto& note : summary.notes) std::cout << note << '\n';
        for (const auto& file : summary.files) std::cout << "wrote " << file << '\n';
        if (summary.failed_checks > 0)
            return report_error("numerical", exit_numerical,
                                "selftest: " + std::to_string(summary.failed_checks) + " checks failed");
        return 0;
    } catch (const ConfigError& e) {
        return report_error("config", exit_config, e.what());
    } catch (const InvariantViolation& e) {
        return report_error("invariant", exit_invariant, e.what(), e.time());
    } catch (const NumericalError& e) {
        return report_error("numerical", exit_numerical, e.what());
    } catch (const std::exception& e) {
        return report_error("numerical", exit_numerical, e.what());
    }
}
