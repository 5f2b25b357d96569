// congbench: batch front end for parallel Bayesian congestion games.
// Subcommands: solve (deterministic instance report), sweep (benefit of the
// uniform-grid signalling policy over a granularity range, CSV output),
// bounds (bound constants and values for the configured support).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "congame/experiment.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::string out_path;
    bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "experiment config file (JSON)")->required();
    cmd->add_option("--seed", opts.seed, "override monte_carlo.seed");
    cmd->add_option("--samples", opts.samples, "override monte_carlo.samples");
    cmd->add_option("--out", opts.out_path, "write output to this path");
    cmd->add_flag("--dump-config", opts.dump_config,
                  "print the parsed config as canonical JSON and exit");
}

congame::ExperimentConfig load(const CommonOptions& opts) {
    congame::ExperimentConfig config = congame::load_config(opts.config_path);
    if (opts.seed) config.mc.seed = *opts.seed;
    if (opts.samples) config.mc.samples = *opts.samples;
    if (!opts.out_path.empty()) config.output = opts.out_path;
    return config;
}

// Returns true when --dump-config handled the invocation. The dump goes to
// stdout unless --out was given explicitly.
bool maybe_dump(const CommonOptions& opts, const congame::ExperimentConfig& config) {
    if (!opts.dump_config) return false;
    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) throw congame::ConfigError("", "cannot write " + opts.out_path);
        out << congame::dump_config(config);
    } else {
        std::cout << congame::dump_config(config);
    }
    return true;
}

int run(const std::string& command, const CommonOptions& opts) {
    congame::ExperimentConfig config = load(opts);
    if (maybe_dump(opts, config)) return 0;

    if (command == "solve") {
        congame::SolveReport report = congame::run_solve(config);
        congame::print_solve_report(std::cout, report);
        return 0;
    }
    if (command == "bounds") {
        congame::BoundsReport report = congame::run_bounds(config);
        congame::print_bounds_report(std::cout, report);
        return 0;
    }

    std::vector<congame::SweepRow> rows = congame::run_sweep(config);
    bool any_failed = false;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "congbench: warning: b=" << row.b << ": " << row.error << "\n";
            any_failed = true;
        }
        if (row.empty_cells > 0)
            std::cerr << "congbench: note: b=" << row.b << ": " << row.empty_cells
                      << " cells carry no prior mass and were excluded\n";
    }
    if (!config.output.empty()) {
        std::ofstream out(config.output, std::ios::binary);
        if (!out) throw congame::ConfigError("", "cannot write " + config.output);
        congame::write_csv(out, rows, config);
        std::cout << "wrote " << rows.size() << " rows to " << config.output << "\n";
    } else {
        congame::write_csv(std::cout, rows, config);
    }
    return any_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel Bayesian congestion games: equilibria, signalling and tolls"};
    app.set_version_flag("--version", std::string("congbench ") + congame::kToolVersion);
    app.require_subcommand(1);

    CommonOptions solve_opts, sweep_opts, bounds_opts;
    add_common(app.add_subcommand("solve", "Nash/optimal flows and tolls for a deterministic instance"),
               solve_opts);
    add_common(app.add_subcommand("sweep", "benefit of the uniform-grid policy over a granularity range"),
               sweep_opts);
    add_common(app.add_subcommand("bounds", "bound constants and values for the configured support"),
               bounds_opts);

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    const CommonOptions& opts = command == "solve"   ? solve_opts
                                : command == "sweep" ? sweep_opts
                                                     : bounds_opts;
    try {
        return run(command, opts);
    } catch (const congame::ConfigError& err) {
        std::cerr << "congbench: error[config]: " << err.what() << "\n";
        return 1;
    } catch (const congame::EstimationError& err) {
        std::cerr << "congbench: error[estimation]: " << err.what() << "\n";
        return 2;
    } catch (const congame::SolverError& err) {
        std::cerr << "congbench: error[solver]: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "congbench: error: " << err.what() << "\n";
        return 1;
    }
}
