// experiment.hpp — orchestration of runs and their output files

#pragma once

#include <string>
#include <vector>

#include "polaron/config.hpp"

namespace polaron::experiment {

inline constexpr const char* echo_file_name = "resolved_config.ini";

struct RunSummary {
    std::vector<std::string> files;  // written paths, in order
    std::vector<std::string> notes;  // diagnostics worth printing
    std::size_t failed_checks{0};    // selftest only
};

// Runs the configured mode and writes its CSV (and optional SVG) files plus the
// resolved-config echo into config.out_dir, creating it if needed.
// Errors propagate as ConfigError / NumericalError / InvariantViolation.
RunSummary run_experiment(const config::ExperimentConfig& config);

struct SelftestLine {
    std::string name;
    bool passed{false};
    std::string detail;
};

// Fast internal consistency checks used by the `selftest` verb.
std::vector<SelftestLine> run_selftest();

} // namespace polaron::experiment
