// qbattery — charging dynamics of a collective two-level-atom battery.
//
// Subcommands: trace, surface, sweep-n, sweep-lambda, ground, selfcheck.
// Flags override values loaded with --config (flat key = value file).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "qbatt/commands.hpp"
#include "qbatt/run_config.hpp"

namespace {

using qbatt::cli::RunConfig;

struct RawRanges {
    std::string n_list_text;
    std::string t_range, a_range, omega_range, lambda_range;
};

// Shared options; values are assigned only when the flag is present, so
// config-file values survive unless overridden.
void add_common_options(CLI::App* cmd, RunConfig& cfg, RawRanges& raw, std::string& config_path) {
    cmd->add_option("--n", cfg.n_atoms, "number of atoms");
    cmd->add_option("--amp", cfg.amp, "drive amplitude A (units of Delta)");
    cmd->add_option("--omega", cfg.omega, "drive frequency (fixed protocol only)");
    cmd->add_option("--lambda", cfg.lambda, "scaled atom-atom coupling g/Delta");
    cmd->add_option("--protocol", cfg.protocol, "locked | fixed")
        ->check(CLI::IsMember({"locked", "fixed"}));
    cmd->add_option("--t-range", raw.t_range, "period grid lo:hi:points");
    cmd->add_option("--a-range", raw.a_range, "amplitude grid lo:hi:points");
    cmd->add_option("--omega-range", raw.omega_range, "frequency grid lo:hi:points");
    cmd->add_option("--lambda-range", raw.lambda_range, "coupling grid lo:hi:points");
    cmd->add_option("--n-list", raw.n_list_text, "comma-separated atom numbers");
    cmd->add_option("--workers", cfg.workers, "worker threads (default $DICKE_BATTERY_WORKERS)");
    cmd->add_option("--out", cfg.out, "output CSV path");
    cmd->add_option("--config", config_path, "flat key = value config file");
}

void apply_raw(const RawRanges& raw, RunConfig& cfg) {
    using qbatt::cli::RangeSpec;
    if (!raw.t_range.empty()) cfg.t_range = RangeSpec::parse(raw.t_range);
    if (!raw.a_range.empty()) cfg.a_range = RangeSpec::parse(raw.a_range);
    if (!raw.omega_range.empty()) cfg.omega_range = RangeSpec::parse(raw.omega_range);
    if (!raw.lambda_range.empty()) cfg.lambda_range = RangeSpec::parse(raw.lambda_range);
    if (!raw.n_list_text.empty()) cfg.n_list = qbatt::cli::parse_n_list(raw.n_list_text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum battery charging simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    RawRanges raw;
    std::string config_path;

    // command name and config file determine the starting values, so resolve
    // both before CLI11 assigns any flags
    std::string command;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (command.empty() && !arg.empty() && arg[0] != '-') command = arg;
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
    }
    if (command == "sweep-n" || command == "sweep-lambda") {
        cfg.t_range = {0.5, 50.0, 400};  // wider default grid: attractive peaks sit late
    }
    try {
        if (!config_path.empty()) cfg.load_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    CLI::App* trace = app.add_subcommand("trace", "stored energy E(T) with analytic overlays");
    CLI::App* surface = app.add_subcommand("surface", "locked E over the (A, omega) plane");
    CLI::App* sweep_n = app.add_subcommand("sweep-n", "first-peak optimum vs atom number");
    CLI::App* sweep_l = app.add_subcommand("sweep-lambda", "first-peak optimum vs coupling");
    CLI::App* ground = app.add_subcommand("ground", "ground-state polarization and gap");
    CLI::App* selfcheck = app.add_subcommand("selfcheck", "fast invariant suite");

    for (CLI::App* cmd : {trace, surface, sweep_n, sweep_l, ground}) {
        add_common_options(cmd, cfg, raw, config_path);
    }
    surface->add_option("--mode", cfg.mode, "analytic | numeric")
        ->check(CLI::IsMember({"analytic", "numeric"}));
    selfcheck->add_flag("--quick", cfg.quick, "finish in a few seconds");
    selfcheck->add_option("--perturb-bessel", cfg.perturb_bessel,
                          "inject an offset into the Bessel check");

    try {
        app.parse(argc, argv);
        apply_raw(raw, cfg);
        if (trace->parsed()) return qbatt::cli::cmd_trace(cfg);
        if (surface->parsed()) return qbatt::cli::cmd_surface(cfg);
        if (sweep_n->parsed()) return qbatt::cli::cmd_sweep_n(cfg);
        if (sweep_l->parsed()) return qbatt::cli::cmd_sweep_lambda(cfg);
        if (ground->parsed()) return qbatt::cli::cmd_ground(cfg);
        if (selfcheck->parsed()) return qbatt::cli::cmd_selfcheck(cfg);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
