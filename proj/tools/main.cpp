// Command-line driver: simulate | stationary | verify | sweep.
//
// Exit codes: 0 success, 1 verification FAIL, 2 configuration error,
// 3 solver divergence, 4 trajectory not stationary by t_end, 5 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chdbc/checkpoint.hpp"
#include "chdbc/config.hpp"
#include "chdbc/diagnostics.hpp"
#include "chdbc/runner.hpp"
#include "chdbc/stationary.hpp"

namespace {

using chdbc::RunConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitStale = 4;
constexpr int kExitIo = 5;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

RunConfig load_config(const CliOptions& opts) {
    RunConfig cfg = RunConfig::from_file(opts.config_path);
    if (opts.seed) cfg.initial.seed = *opts.seed;
    return cfg;
}

std::string out_path(const CliOptions& opts, const std::string& rel) {
    return (std::filesystem::path(opts.out_dir) / rel).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw chdbc::IoError("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw chdbc::IoError("write to '" + path + "' failed");
}

chdbc::RunResult run_from_config(const RunConfig& cfg, const CliOptions& opts,
                                 std::ofstream* csv) {
    const chdbc::StripMesh mesh = cfg.make_mesh();
    chdbc::TimeStepper stepper(mesh, cfg.solver_config(), cfg.potentials, cfg.velocity);
    const chdbc::Recorder recorder(mesh, cfg.potentials);
    const chdbc::InitialData init =
        chdbc::make_initial_data(mesh, cfg.potentials, cfg.build_initial_field(mesh));

    chdbc::RunOptions ropts;
    ropts.sample_interval = cfg.sample_interval;
    if (csv) {
        *csv << chdbc::csv_header() << "\n";
        ropts.on_record = [csv](const chdbc::DiagnosticsRecord& rec) {
            *csv << chdbc::csv_row(rec) << "\n";
        };
    }
    chdbc::RunResult result = chdbc::run(init, stepper, recorder, ropts);
    if (!opts.quiet)
        std::cout << "steps " << result.steps << "  t " << result.final_state.t
                  << "  mean " << result.records.back().mean_rho << "  energy "
                  << result.final_energy << "  |grad mu| "
                  << result.records.back().grad_mu_norm << "\n";
    return result;
}

int cmd_simulate(const CliOptions& opts) {
    const RunConfig cfg = load_config(opts);
    std::filesystem::create_directories(opts.out_dir);
    std::ofstream csv(out_path(opts, cfg.csv_path));
    if (!csv) throw chdbc::IoError("cannot open CSV output");
    const chdbc::StripMesh mesh = cfg.make_mesh();
    const chdbc::RunResult result = run_from_config(cfg, opts, &csv);
    csv.close();
    if (!csv) throw chdbc::IoError("CSV write failed");
    chdbc::save_checkpoint(out_path(opts, cfg.checkpoint_path), mesh, result.final_state);
    return kExitOk;
}

int cmd_stationary(const CliOptions& opts) {
    const RunConfig cfg = load_config(opts);
    std::filesystem::create_directories(opts.out_dir);
    const chdbc::StripMesh mesh = cfg.make_mesh();

    std::optional<chdbc::BulkSurfaceField> guess;
    if (cfg.initial.kind != chdbc::InitialKind::ConstantNoise || cfg.initial.amplitude > 0.0)
        guess = cfg.build_initial_field(mesh);
    const chdbc::StationarySolution sol = chdbc::solve_stationary(
        cfg.initial.m0, mesh, cfg.potentials, guess ? &*guess : nullptr);

    json rep;
    rep["mu_s"] = sol.mu_s;
    rep["residual"] = sol.residual_norm;
    rep["mean"] = chdbc::generalized_mean(mesh, sol.rho_s);
    rep["energy"] = chdbc::free_energy(mesh, cfg.potentials, sol.rho_s);
    write_text(out_path(opts, cfg.report_path), rep.dump(2) + "\n");
    if (!opts.quiet) std::cout << rep.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const CliOptions& opts) {
    const RunConfig cfg = load_config(opts);
    std::filesystem::create_directories(opts.out_dir);
    std::ofstream csv(out_path(opts, cfg.csv_path));
    if (!csv) throw chdbc::IoError("cannot open CSV output");
    const chdbc::StripMesh mesh = cfg.make_mesh();
    const chdbc::RunResult result = run_from_config(cfg, opts, &csv);

    const chdbc::OmegaLimitReport rep =
        chdbc::verify_omega_limit(result, mesh, cfg.potentials, cfg.omega);
    json j;
    j["pass"] = rep.pass;
    j["endpoint_distance"] = rep.endpoint_distance;
    j["mu_flatness"] = rep.mu_flatness;
    j["matched_mu_s"] = rep.matched_mu_s;
    j["final_dtrho_norm"] = rep.final_dtrho_norm;
    j["sample_times"] = rep.sample_times;
    write_text(out_path(opts, cfg.report_path), j.dump(2) + "\n");
    if (!opts.quiet) std::cout << j.dump(2) << "\n";
    return rep.pass ? kExitOk : kExitFail;
}

int cmd_sweep(const CliOptions& opts) {
    RunConfig cfg = load_config(opts);
    if (!cfg.sweep) throw chdbc::ConfigError("config: sweep section required for sweep");
    std::filesystem::create_directories(opts.out_dir);
    json summary = json::array();
    for (double value : cfg.sweep->values) {
        RunConfig cell = cfg;
        if (cfg.sweep->parameter == "eps")
            cell.potentials.eps = value;
        else
            cell.dt = value;
        std::ostringstream name;
        name << "sweep_" << cfg.sweep->parameter << "_" << value << ".csv";
        std::ofstream csv(out_path(opts, name.str()));
        if (!csv) throw chdbc::IoError("cannot open CSV output");
        const chdbc::StripMesh mesh = cell.make_mesh();
        const chdbc::RunResult result = run_from_config(cell, opts, &csv);
        json row;
        row[cfg.sweep->parameter] = value;
        row["final_stat_residual"] = result.records.back().stat_residual;
        row["max_abs_rho"] = result.final_state.rho.values.cwiseAbs().maxCoeff();
        row["final_energy"] = result.final_energy;
        row["csv"] = name.str();
        summary.push_back(row);
        (void)mesh;
    }
    write_text(out_path(opts, cfg.report_path), summary.dump(2) + "\n");
    if (!opts.quiet) std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscous Cahn-Hilliard strip solver with dynamic boundary conditions"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    CliOptions opts;
    app.add_option("--config", opts.config_path, "path to the JSON run configuration")
        ->required();
    app.add_option("--out", opts.out_dir, "output directory (default: .)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override initial.seed");
    app.add_flag("--quiet", opts.quiet, "suppress progress output");

    auto* simulate = app.add_subcommand("simulate", "advance to t_end, write CSV + checkpoint");
    auto* stationary = app.add_subcommand("stationary", "solve the stationary system");
    auto* verify = app.add_subcommand("verify", "run and match the endpoint against a stationary solution");
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep over eps or dt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    if (seed_opt->count() > 0) opts.seed = seed_value;

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (stationary->parsed()) return cmd_stationary(opts);
        if (verify->parsed()) return cmd_verify(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        return kExitConfig;
    } catch (const chdbc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const chdbc::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const chdbc::StalenessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStale;
    } catch (const chdbc::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const chdbc::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
