// experiment.cpp — mode dispatch, sweeps and file output

#include "polaron/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "polaron/bath.hpp"
#include "polaron/dynamics.hpp"
#include "polaron/errors.hpp"
#include "polaron/numerics.hpp"
#include "polaron/oracle.hpp"
#include "polaron/output.hpp"
#include "polaron/rates.hpp"

namespace polaron::experiment {

namespace fs = std::filesystem;
using config::ExperimentConfig;
using config::Mode;

namespace {

// Serializes every file write of a run.
class Collector {
public:
    explicit Collector(const fs::path& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError(fmt::format("cannot open '{}' for writing", path.string()));
        out << content;
        out.close();
        if (!out) throw ConfigError(fmt::format("write to '{}' failed", path.string()));
        summary.files.push_back(path.string());
    }

    RunSummary summary;

private:
    fs::path dir_;
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

struct Column {
    std::string name;
    std::vector<double> values;
};

std::string table_csv(const std::string& x_name, const std::vector<double>& x, const std::vector<Column>& columns) {
    std::ostringstream out;
    std::vector<std::string> header{x_name};
    for (const auto& c : columns) header.push_back(c.name);
    output::CsvWriter csv(out, header);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> row{x[i]};
        for (const auto& c : columns) row.push_back(c.values[i]);
        csv.row(row);
    }
    return out.str();
}

std::string table_svg(const std::string& title, const std::string& x_name, const std::vector<double>& x,
                      const std::vector<Column>& columns) {
    std::ostringstream out;
    std::vector<output::Series> series;
    for (const auto& c : columns) series.push_back({c.name, c.values});
    output::write_svg_chart(out, title, x_name, x, series);
    return out.str();
}

void emit_table(Collector& collector, const ExperimentConfig& config, const std::string& stem, const std::string& title,
                const std::string& x_name, const std::vector<double>& x, const std::vector<Column>& columns) {
    collector.write(stem + ".csv", table_csv(x_name, x, columns));
    if (config.svg) collector.write(stem + ".svg", table_svg(title, x_name, x, columns));
}

std::string label(const char* prefix, double v) { return fmt::format("{}{}", prefix, v); }

// Master-equation trajectory for one bath.
dynamics::Trajectory solve(const bath::BathModel& model, const ExperimentConfig& config, const numerics::TimeGrid& grid,
                           unsigned jobs) {
    const rates::RateTable table = rates::build_rate_table(model, config.j_hop, grid, rates::RateOptions{{}, jobs});
    return dynamics::evolve_ode(config.initial_state(), table);
}

std::vector<double> field(const dynamics::Trajectory& traj, double dynamics::DensityMatrixST::*member) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& s : traj.states) out.push_back(s.*member);
    return out;
}

void run_single(const ExperimentConfig& config, Collector& collector) {
    const numerics::TimeGrid grid(config.t_max, config.dt);
    rates::RateTable table = rates::build_rate_table(config.bath, config.j_hop, grid,
                                                     rates::RateOptions{{}, config.jobs});
    const dynamics::Trajectory traj = dynamics::evolve_ode(config.initial_state(), table);

    std::ostringstream traj_csv;
    dynamics::write_trajectory_csv(traj_csv, traj);
    collector.write("trajectory.csv", traj_csv.str());

    std::ostringstream rate_csv;
    const auto ordering = rates::check_gamma_ordering(table);
    rate_csv << "# gamma_plus < gamma_minus at " << ordering.violations << " of " << grid.size() << " grid points\n";
    rates::write_rate_csv(rate_csv, table);
    collector.write("rates.csv", rate_csv.str());
    if (ordering.violations > 0)
        collector.summary.notes.push_back(fmt::format("gamma_+ < gamma_- at {} grid points (first t = {})",
                                                      ordering.violations, output::format_number(*ordering.first_time)));

    if (config.svg) {
        const std::vector<double> x(grid.points().begin(), grid.points().end());
        collector.write("trajectory.svg", table_svg("coherence and population difference", "t", x,
                                                    {{"C", traj.coherence}, {"P_D", traj.pop_diff}}));
    }
}

std::vector<dynamics::Trajectory> sweep(const ExperimentConfig& config, const std::vector<bath::BathModel>& models,
                                        const numerics::TimeGrid& grid) {
    std::vector<dynamics::Trajectory> results(models.size(), dynamics::Trajectory{grid, {}, {}, {}, true, 0.0});
    numerics::parallel_for(models.size(), config.jobs,
                           [&](std::size_t i) { results[i] = solve(models[i], config, grid, 1); });
    return results;
}

void run_sweep_s(const ExperimentConfig& config, Collector& collector) {
    const numerics::TimeGrid grid(config.t_max, config.dt);
    std::vector<bath::BathModel> models;
    for (double s : config.s_values) {
        bath::BathModel m = config.bath;
        m.s = s;
        models.push_back(m);
    }
    const auto results = sweep(config, models, grid);
    const std::vector<double> t(grid.points().begin(), grid.points().end());

    std::vector<Column> coherence, populations;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double s = config.s_values[i];
        coherence.push_back({label("C_s", s), results[i].coherence});
        populations.push_back({label("P_D_s", s), results[i].pop_diff});
    }
    for (std::size_t i = 0; i < results.size(); ++i)
        populations.push_back({label("rho_tt_s", config.s_values[i]), field(results[i], &dynamics::DensityMatrixST::rho_tt)});
    for (std::size_t i = 0; i < results.size(); ++i)
        populations.push_back({label("rho_ss_s", config.s_values[i]), field(results[i], &dynamics::DensityMatrixST::rho_ss)});

    emit_table(collector, config, "fig2a", "coherence C(t) per s", "t", t, coherence);
    emit_table(collector, config, "fig2bcd", "populations per s", "t", t, populations);
}

void run_sweep_lambda(const ExperimentConfig& config, Collector& collector) {
    const numerics::TimeGrid grid(config.t_max, config.dt);
    std::vector<bath::BathModel> models;
    for (double l : config.lambda_values) {
        bath::BathModel m = config.bath;
        m.lambda_g = l;
        models.push_back(m);
    }
    const auto results = sweep(config, models, grid);
    const std::vector<double> t(grid.points().begin(), grid.points().end());

    std::vector<Column> columns;
    for (std::size_t i = 0; i < results.size(); ++i) columns.push_back({label("C_lambda", config.lambda_values[i]), results[i].coherence});
    for (std::size_t i = 0; i < results.size(); ++i) columns.push_back({label("P_D_lambda", config.lambda_values[i]), results[i].pop_diff});
    emit_table(collector, config, "sweep_lambda", "coherence and population difference per lambda", "t", t, columns);
}

void run_effective_hopping(const ExperimentConfig& config, Collector& collector) {
    const auto lambdas = linspace(0.0, config.hopping_lambda_max, config.hopping_lambda_points);
    std::vector<Column> by_s;
    for (double s : config.s_values) {
        Column c{label("ratio_s", s), {}};
        for (double l : lambdas) {
            bath::BathModel m = config.bath;
            m.lambda_g = l;
            m.s = s;
            c.values.push_back(bath::effective_hopping_ratio(m));
        }
        by_s.push_back(std::move(c));
    }
    emit_table(collector, config, "fig1a", "effective hopping J~/J vs lambda", "lambda_g", lambdas, by_s);

    const auto ss = linspace(0.0, config.hopping_s_max, config.hopping_s_points);
    std::vector<Column> by_lambda;
    for (double l : config.lambda_values) {
        Column c{label("ratio_lambda", l), {}};
        for (double s : ss) {
            bath::BathModel m = config.bath;
            m.lambda_g = l;
            m.s = s;
            c.values.push_back(bath::effective_hopping_ratio(m));
        }
        by_lambda.push_back(std::move(c));
    }
    emit_table(collector, config, "fig1b", "effective hopping J~/J vs s", "s", ss, by_lambda);
}

oracle::TruncatedBathConfig oracle_bath(const ExperimentConfig& config) {
    auto bath = oracle::discretize_bath(config.bath, config.modes, config.n_max, config.j_hop, config.oracle_epsilon,
                                        config.oracle_omega_max);
    bath.dim_cap = config.dim_cap;
    bath.validate();
    return bath;
}

void run_bangbang(const ExperimentConfig& config, Collector& collector) {
    const auto bath = oracle_bath(config);
    const auto report = oracle::run_bangbang_scan(bath, config.initial_state(), config.pulse_time, config.cycles, config.jobs);
    std::ostringstream out;
    oracle::write_bangbang_csv(out, report, bath.describe() + " T=" + output::format_number(config.pulse_time));
    collector.write("bangbang.csv", out.str());
    collector.summary.notes.push_back("fitted slope " + output::format_number(report.fitted_slope));
    for (const auto& p : report.points) {
        if (!(p.trace_distance_pulsed < p.trace_distance_free))
            collector.summary.notes.push_back(fmt::format("N = {}: pulses do not reduce the trace distance", p.n_cycles));
    }
    if (config.svg) {
        std::vector<double> x;
        Column pulsed{"trace_distance_pulsed", {}}, free{"trace_distance_free", {}};
        for (const auto& p : report.points) {
            x.push_back(p.delta_t);
            pulsed.values.push_back(p.trace_distance_pulsed);
            free.values.push_back(p.trace_distance_free);
        }
        collector.write("bangbang.svg", table_svg("trace distance vs pulse interval", "delta_t", x, {pulsed, free}));
    }
}

void run_oracle_compare(const ExperimentConfig& config, Collector& collector) {
    const auto bath = oracle_bath(config);
    const numerics::TimeGrid grid(config.compare_t_max, config.compare_dt);
    const auto report = oracle::compare_with_master_equation(bath, config.initial_state(), grid);
    std::ostringstream out;
    oracle::write_comparison_csv(out, report, bath.describe());
    collector.write("compare.csv", out.str());
    collector.summary.notes.push_back(fmt::format("rms |C_oracle - C_master| = {}, J~/dE_B = {}",
                                                  output::format_number(report.rms_coherence_difference),
                                                  output::format_number(report.oracle.jtilde_over_gap)));
    if (report.oracle.jtilde_over_gap > 0.1)
        collector.summary.notes.push_back("J~/dE_B > 0.1: outside the regime where the master equation is expected to hold");
    if (config.svg) {
        const std::vector<double> t(grid.points().begin(), grid.points().end());
        collector.write("compare.svg", table_svg("oracle vs master equation", "t", t,
                                                 {{"C_oracle", report.oracle.trajectory.coherence},
                                                  {"C_master", report.master.coherence}}));
    }
}

SelftestLine check(std::string name, bool passed, std::string detail) { return {std::move(name), passed, std::move(detail)}; }

} // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
    config.validate();
    Collector collector(config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir));
    collector.write(echo_file_name, config::echo_config(config));

    switch (*config.mode) {
    case Mode::single: run_single(config, collector); break;
    case Mode::sweep_s: run_sweep_s(config, collector); break;
    case Mode::sweep_lambda: run_sweep_lambda(config, collector); break;
    case Mode::effective_hopping: run_effective_hopping(config, collector); break;
    case Mode::bangbang: run_bangbang(config, collector); break;
    case Mode::oracle_compare: run_oracle_compare(config, collector); break;
    case Mode::selftest: {
        std::ostringstream out;
        output::CsvWriter csv(out, {"check", "passed"});
        const auto lines = run_selftest();
        std::size_t failures = 0;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            csv.comment(lines[i].name + ": " + lines[i].detail);
            csv.row({static_cast<double>(i + 1), lines[i].passed ? 1.0 : 0.0});
            collector.summary.notes.push_back((lines[i].passed ? "PASS " : "FAIL ") + lines[i].name + " (" + lines[i].detail + ")");
            if (!lines[i].passed) ++failures;
        }
        collector.write("selftest.csv", out.str());
        collector.summary.failed_checks = failures;
        break;
    }
    }
    return collector.summary;
}

std::vector<SelftestLine> run_selftest() {
    std::vector<SelftestLine> lines;

    {
        double worst = 0.0;
        for (double s : {0.1, 1.0, 10.0}) {
            bath::BathModel m{1.0, 1.0, s, 1.0};
            worst = std::max(worst, std::abs(bath::kernel_cos(0.0, m) - bath::kernel_zero(m)));
        }
        lines.push_back(check("kernel closed form at tau = 0", worst <= 1e-8, "max deviation " + output::format_number(worst)));
    }
    {
        const numerics::TimeGrid grid(5.0, 0.01);
        bath::BathModel m{1.0, 1.0, 0.0, 1.0};
        const auto table = rates::build_rate_table(m, 1.0, grid, rates::RateOptions{{}, 1});
        const auto traj = dynamics::evolve_closed_form(dynamics::DensityMatrixST::fig2_state(), table);
        double worst = 0.0;
        for (double c : traj.coherence) worst = std::max(worst, std::abs(c - 1.0));
        lines.push_back(check("no decoherence at s = 0", worst <= 1e-9, "max |C - 1| " + output::format_number(worst)));
    }
    {
        const numerics::TimeGrid grid(5.0, 0.01);
        bath::BathModel m{1.0, 1.0, 10.0, 1.0};
        const auto table = rates::build_rate_table(m, 1.0, grid, rates::RateOptions{{}, 1});
        const auto rho0 = dynamics::DensityMatrixST::fig2_state();
        const auto ode = dynamics::evolve_ode(rho0, table);
        const auto closed = dynamics::evolve_closed_form(rho0, table);
        double worst = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            worst = std::max(worst, (ode.states[k].matrix() - closed.states[k].matrix()).cwiseAbs().maxCoeff());
        lines.push_back(check("ODE matches closed form", worst <= 1e-6, "max deviation " + output::format_number(worst)));
    }
    {
        const auto report = dynamics::lamb_shift_vanishes();
        lines.push_back(check("Lamb shift commutes with the sector", report.vanishes(),
                              "max commutator entry " + output::format_number(report.max_commutator_entry)));
    }
    {
        oracle::TruncatedBathConfig cfg;
        cfg.mode_freqs = {1.0};
        cfg.g1 = {{0.5, 0.0}};
        cfg.g2 = {{0.0, 0.0}};
        cfg.n_max = 12;
        const auto report = oracle::lang_firsov_check(cfg);
        lines.push_back(check("Lang-Firsov dressed hopping", report.spectrum_deviation <= 1e-8 && report.hopping_deviation <= 1e-4,
                              "spectrum " + output::format_number(report.spectrum_deviation) + ", hopping " +
                                  output::format_number(report.hopping_deviation)));
    }
    return lines;
}

} // namespace polaron::experiment
