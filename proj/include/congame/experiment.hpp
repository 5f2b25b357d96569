#pragma once

// Experiment configuration and batch runners behind the congbench CLI.
// Configs are JSON: a network section with per-edge coefficient entries
// (fixed numbers or {low, high} ranges for random ones), a prior over the
// random coefficients in declaration order (edge-major, degree ascending),
// a policy (grid granularity, granularity sweep, or explicit cells), toll
// toggles, Monte Carlo and solver settings.

#include <iosfwd>
#include <string>
#include <vector>

#include "congame/analysis.hpp"

namespace congame {

inline constexpr const char* kToolVersion = "1.0.0";

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct CoefficientSpec {
    bool random = false;
    double value = 0.0;              // fixed coefficient
    double low = 0.0, high = 0.0;    // support interval when random
};

enum class TollMode { off, on, both };

struct PolicySpec {
    enum class Kind { grid, sweep, cells };
    Kind kind = Kind::grid;
    int grid = 1;
    int b_min = 1, b_max = 1;
    std::vector<PolicyCell> cells;
};

struct AtomSpec {
    std::vector<double> value;  // over the random coefficients, declaration order
    double probability = 0.0;
};

struct ExperimentConfig {
    double demand = 1.0;
    std::vector<int> degrees;
    // coefficients[edge][j] pairs with degrees[j]
    std::vector<std::vector<CoefficientSpec>> coefficients;

    bool prior_given = false;
    PriorKind prior_kind = PriorKind::uniform_box;
    std::vector<double> prior_mean_values;
    std::vector<std::vector<double>> prior_covariance;
    std::vector<AtomSpec> prior_atoms;

    PolicySpec policy;
    TollMode tolls = TollMode::both;
    MonteCarloConfig mc;
    SolverConfig solver;
    std::string output;

    std::size_t edge_count() const { return coefficients.size(); }
    std::size_t random_count() const;
};

ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& config);

Network build_network(const ExperimentConfig& config);
BoxSupport build_support(const ExperimentConfig& config);
Prior build_prior(const ExperimentConfig& config);
SignallingPolicy build_policy(const ExperimentConfig& config, int granularity);

struct SolveReport {
    EquilibriumResult nash;
    double nash_latency = 0.0;
    EquilibriumResult optimal;
    double optimal_latency = 0.0;
    TollVector tolls;
    BoundConstants constants;
};

struct BoundsReport {
    BoundConstants constants;
    double mean_distance = 0.0;  // |E[alpha] - support low|_2
    double theta_bound_value = 0.0;
    double xi_bound_value = 0.0;
};

struct SweepRow {
    int b = 1;
    double baseline_untolled = 0.0, signalled_untolled = 0.0, benefit_untolled = 0.0;
    double baseline_tolled = 0.0, signalled_tolled = 0.0, benefit_tolled = 0.0;
    double theta_bound_value = 0.0, xi_bound_value = 0.0;
    double mc_stderr = 0.0;
    std::size_t empty_cells = 0;  // grid cells without prior mass, excluded
    std::string error;            // set when estimation failed for this granularity
};

SolveReport run_solve(const ExperimentConfig& config);
BoundsReport run_bounds(const ExperimentConfig& config);
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

// Shortest round-trip decimal form; used everywhere numbers are printed so
// identical runs emit byte-identical files.
std::string format_double(double value);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, const ExperimentConfig& config);
void print_solve_report(std::ostream& out, const SolveReport& report);
void print_bounds_report(std::ostream& out, const BoundsReport& report);

}  // namespace congame
