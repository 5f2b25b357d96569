#pragma once

// Equilibrium solvers for parallel networks. Both the selfish (Nash) flow and
// the system-optimal flow equalize a per-edge level function on the used
// edges -- latency in the Nash case, marginal cost in the optimal case -- so
// a single monotone level search covers both.

#include <stdexcept>
#include <string>
#include <vector>

#include "congame/game.hpp"

namespace congame {

struct SolverConfig {
    // Mass-balance tolerance |sum f_e - r|, applied at unit demand; games are
    // rescaled to demand 1 internally, so this is relative to the demand.
    double residual_tolerance = 1e-10;
    int max_iterations = 200;           // outer level bisection
    double level_bracket_growth = 2.0;  // upper-bracket growth factor
};

struct EquilibriumResult {
    Flow flow;
    double common_level = 0.0;  // equalized latency (Nash) or marginal cost (optimal)
    std::vector<std::size_t> used_edges;
    int iterations = 0;
    // Set when several constant edges tie at the equilibrium level and the
    // split between them is fixed by the lowest-index rule.
    bool degenerate = false;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, EquilibriumResult best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const EquilibriumResult& best_iterate() const { return best_; }

private:
    EquilibriumResult best_;
};

enum class LevelRule { latency, marginal_cost };

EquilibriumResult solve_level_equilibrium(const Network& net, const CoefficientVector& alpha,
                                          LevelRule rule, const SolverConfig& config = {});

// Selfish routing equilibrium: used edges share one latency, unused edges are
// at least as slow empty.
EquilibriumResult nash_flow(const Network& net, const CoefficientVector& alpha,
                            const SolverConfig& config = {});

// Minimizer of the total latency: used edges share one marginal cost.
EquilibriumResult optimal_flow(const Network& net, const CoefficientVector& alpha,
                               const SolverConfig& config = {});

// Exhaustive simplex grid search for the minimum total latency. Test oracle;
// guarded to small networks (edge_count <= 4, grid_points <= 2000).
Flow brute_force_best_flow(const Network& net, const CoefficientVector& alpha, int grid_points);

}  // namespace congame
