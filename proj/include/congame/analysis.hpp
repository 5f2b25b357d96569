#pragma once

// Benefit-of-signalling analysis. Under a partition policy the per-signal
// flow is the Nash (or, with the marginal-cost tolls applied, the optimal)
// flow at the posterior expected coefficients, so expected total latencies
// reduce to a probability-weighted sum of deterministic solves.

#include <optional>
#include <string>
#include <vector>

#include "congame/belief.hpp"
#include "congame/solver.hpp"

namespace congame {

// Constant per-edge tolls attached to one signal.
struct TollVector {
    std::vector<double> per_edge;
};

// Closed-form constants bounding how fast equilibrium total latency can move
// with the coefficients; theta for untolled play, xi with optimal tolls.
// Infinite when the linear-term floor rho1_minus vanishes.
struct BoundConstants {
    double rho0_minus = 0.0;
    double rho1_minus = 0.0;
    double rho_plus = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    AssumptionReport assumption;
};

struct PerSignalDetail {
    std::string label;
    double probability = 0.0;
    CoefficientVector expected_coeffs;
    Flow flow;
    double latency = 0.0;
    std::optional<TollVector> tolls;
};

struct ExpectedLatencyResult {
    double value = 0.0;
    std::vector<PerSignalDetail> per_signal;
    std::vector<std::string> empty_cells;
};

struct BenefitReport {
    double baseline_latency = 0.0;   // no-information expected total latency
    double signalled_latency = 0.0;  // under the given policy
    double benefit = 0.0;            // baseline - signalled
    bool tolled = false;
    double bound_value = 0.0;        // (theta or xi) * |E[alpha] - support low|
    bool bound_certified = false;    // positivity-floor assumption held
    double mc_stderr = 0.0;          // standard error of the benefit; 0 for analytic priors
    std::vector<PerSignalDetail> per_signal;
    std::vector<std::string> empty_cells;  // dropped from the expectation
};

BoundConstants bound_constants(const Network& net, const BoxSupport& support);

// Marginal-cost tolls at the optimal flow of the expected network: edge e
// pays sum over d of d * alpha_{e,d} * x_e^d. Makes the optimal flow an
// equilibrium of the tolled game.
TollVector optimal_tolls(const Network& net, const CoefficientVector& expected_coeffs,
                         const SolverConfig& config = {});

// Nash flow of the game with constant tolls added to each edge's latency.
EquilibriumResult tolled_nash_flow(const Network& net, const CoefficientVector& alpha,
                                   const TollVector& tolls, const SolverConfig& config = {});

ExpectedLatencyResult expected_latency_under_policy(const Network& net, const Prior& prior,
                                                    const SignallingPolicy& policy, bool tolled,
                                                    const SolverConfig& solver = {},
                                                    const MonteCarloConfig& mc = {});
ExpectedLatencyResult expected_latency_under_policy(const Network& net, const Prior& prior,
                                                    const SignallingPolicy& policy, bool tolled,
                                                    const SolverConfig& solver,
                                                    const SamplePool& pool);

BenefitReport benefit(const Network& net, const Prior& prior, const SignallingPolicy& policy,
                      bool tolled, const SolverConfig& solver = {}, const MonteCarloConfig& mc = {});
BenefitReport benefit(const Network& net, const Prior& prior, const SignallingPolicy& policy,
                      bool tolled, const SolverConfig& solver, const SamplePool& pool);

// Finite-difference probe of the equilibrium total latency: the change
// between coefficient vectors a and b divided by their distance. Stays below
// theta (untolled) and xi (tolled) when a, b lie in the matching support box.
double lipschitz_probe(const Network& net, const CoefficientVector& a, const CoefficientVector& b,
                       bool tolled, const SolverConfig& config = {});

}  // namespace congame
