#include "congame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace congame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

// Tolls of the marginal-cost form evaluated at a given flow.
TollVector tolls_at_flow(const Network& net, const CoefficientVector& alpha, const Flow& flow) {
    TollVector tolls;
    tolls.per_edge.resize(net.edge_count, 0.0);
    for (std::size_t e = 0; e < net.edge_count; ++e) {
        double t = 0.0;
        for (std::size_t j = 0; j < net.degrees.size(); ++j) {
            int d = net.degrees[j];
            t += d * alpha.at(e, j) * pow_int(flow.per_edge[e], d);
        }
        tolls.per_edge[e] = t;
    }
    return tolls;
}

}  // namespace

BoundConstants bound_constants(const Network& net, const BoxSupport& support) {
    require(support.low().matches(net), "support shape does not match network");

    BoundConstants out;
    out.assumption = check_assumption(net, support.low());

    auto zero_idx = net.degrees.index_of(0);
    auto one_idx = net.degrees.index_of(1);
    out.rho0_minus = kInf;
    out.rho1_minus = kInf;
    for (std::size_t e = 0; e < net.edge_count; ++e) {
        out.rho0_minus = std::min(out.rho0_minus, zero_idx ? support.low().at(e, *zero_idx) : 0.0);
        out.rho1_minus = std::min(out.rho1_minus, one_idx ? support.low().at(e, *one_idx) : 0.0);
        double cap = 0.0;
        for (std::size_t j = 0; j < net.degrees.size(); ++j)
            cap += (net.degrees[j] + 1) * support.high().at(e, j);
        out.rho_plus = std::max(out.rho_plus, cap);
    }

    const auto degree_count = static_cast<double>(net.degrees.size());
    const auto edge_count = static_cast<double>(net.edge_count);
    if (out.rho1_minus > 0.0) {
        double spread = out.rho_plus - out.rho0_minus;
        out.theta = degree_count + spread / (2.0 * out.rho1_minus) * (edge_count + degree_count - 1.0);
        double powers = 0.0;
        for (std::size_t j = 0; j < net.degrees.size(); ++j) {
            int d = net.degrees[j];
            if (d >= 1) powers += pow_int(static_cast<double>(d + 1), d);
        }
        out.xi = degree_count + spread / (4.0 * out.rho1_minus) * (edge_count + powers);
    } else {
        out.theta = kInf;
        out.xi = kInf;
    }
    return out;
}

TollVector optimal_tolls(const Network& net, const CoefficientVector& expected_coeffs,
                         const SolverConfig& config) {
    EquilibriumResult opt = optimal_flow(net, expected_coeffs, config);
    return tolls_at_flow(net, expected_coeffs, opt.flow);
}

EquilibriumResult tolled_nash_flow(const Network& net, const CoefficientVector& alpha,
                                   const TollVector& tolls, const SolverConfig& config) {
    require(tolls.per_edge.size() == net.edge_count, "toll vector shape does not match network");
    require(alpha.matches(net), "coefficient shape does not match network");

    // A constant toll is one more degree-0 term.
    std::vector<int> degrees = net.degrees.degrees();
    if (!net.degrees.contains(0)) degrees.push_back(0);
    Network tolled_net(net.edge_count, DegreeSet(degrees), net.demand);

    CoefficientVector tolled_alpha(net.edge_count, tolled_net.degrees.size());
    auto zero_idx = *tolled_net.degrees.index_of(0);
    for (std::size_t e = 0; e < net.edge_count; ++e) {
        for (std::size_t j = 0; j < net.degrees.size(); ++j) {
            auto idx = *tolled_net.degrees.index_of(net.degrees[j]);
            tolled_alpha.at(e, idx) = alpha.at(e, j);
        }
        double base = tolled_alpha.at(e, zero_idx) + tolls.per_edge[e];
        require(base >= 0.0, "tolled constant term must stay nonnegative");
        tolled_alpha.at(e, zero_idx) = base;
    }
    return nash_flow(tolled_net, tolled_alpha, config);
}

namespace {

ExpectedLatencyResult expected_latency_from_set(const Network& net, bool tolled,
                                                const SolverConfig& solver,
                                                const PosteriorSet& set) {
    ExpectedLatencyResult out;
    out.empty_cells = set.empty_cells;
    out.per_signal.reserve(set.summaries.size());
    for (const auto& summary : set.summaries) {
        require(summary.expected_coeffs.matches(net),
                "posterior coefficient shape does not match network");
        PerSignalDetail detail;
        detail.label = summary.label;
        detail.probability = summary.cell_probability;
        detail.expected_coeffs = summary.expected_coeffs;
        try {
            EquilibriumResult eq = tolled ? optimal_flow(net, summary.expected_coeffs, solver)
                                          : nash_flow(net, summary.expected_coeffs, solver);
            detail.flow = eq.flow;
        } catch (const SolverError& err) {
            throw SolverError(std::string(err.what()) + " (signal " + summary.label + ")",
                              err.best_iterate());
        }
        detail.latency = total_latency(net, summary.expected_coeffs, detail.flow);
        if (tolled) detail.tolls = tolls_at_flow(net, summary.expected_coeffs, detail.flow);
        out.value += detail.probability * detail.latency;
        out.per_signal.push_back(std::move(detail));
    }
    return out;
}

// Latency is linear in the coefficients at fixed flow, so per-flow weights
// f_e^(d+1) turn each pool sample into one realization of the baseline-minus-
// signalled latency difference; the benefit estimate's standard error is the
// spread of those differences.
double benefit_stderr(const Network& net, const BoxSupport& support, const SamplePool& pool,
                      const PosteriorSet& signal_set,
                      const std::vector<PerSignalDetail>& baseline,
                      const std::vector<PerSignalDetail>& signalled) {
    const std::size_t coords = net.coord_count();
    const std::size_t k = support.dimension();

    auto weights_of = [&](const Flow& flow) {
        std::vector<double> w(coords, 0.0);
        for (std::size_t e = 0; e < net.edge_count; ++e)
            for (std::size_t j = 0; j < net.degrees.size(); ++j)
                w[e * net.degrees.size() + j] = pow_int(flow.per_edge[e], net.degrees[j] + 1);
        return w;
    };

    std::vector<double> w0 = weights_of(baseline[0].flow);
    std::vector<std::vector<double>> diff(signalled.size());
    std::vector<double> fixed_part(signalled.size(), 0.0);
    for (std::size_t i = 0; i < signalled.size(); ++i) {
        auto wi = weights_of(signalled[i].flow);
        diff[i].resize(k);
        double fixed = 0.0;
        std::vector<bool> is_random(coords, false);
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t coord = support.random_coords()[j];
            diff[i][j] = w0[coord] - wi[coord];
            is_random[coord] = true;
        }
        for (std::size_t c = 0; c < coords; ++c)
            if (!is_random[c]) fixed += (w0[c] - wi[c]) * support.low().flat()[c];
        fixed_part[i] = fixed;
    }

    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < pool.size(); ++s) {
        auto cell = signal_set.assignment[s];
        auto x = pool.sample(s);
        double d = fixed_part[cell];
        for (std::size_t j = 0; j < k; ++j) d += diff[cell][j] * x[j];
        ++n;
        double delta = d - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (d - mean);
    }
    if (n < 2) return kInf;
    double variance = m2 / static_cast<double>(n - 1);
    return std::sqrt(variance / static_cast<double>(n));
}

BenefitReport benefit_core(const Network& net, const Prior& prior, const SignallingPolicy& policy,
                           bool tolled, const SolverConfig& solver, const SamplePool* pool,
                           const MonteCarloConfig& mc) {
    PosteriorSet baseline_set;
    PosteriorSet signal_set;
    SignallingPolicy baseline_policy = single_cell_policy(prior.support());
    std::optional<SamplePool> own_pool;
    if (prior.needs_sampling() && pool == nullptr) {
        own_pool = SamplePool::build(prior, mc);
        pool = &*own_pool;
    }
    if (prior.needs_sampling()) {
        baseline_set = posterior_summaries(prior, baseline_policy, *pool);
        signal_set = posterior_summaries(prior, policy, *pool);
    } else {
        baseline_set = posterior_summaries(prior, baseline_policy);
        signal_set = posterior_summaries(prior, policy);
    }

    ExpectedLatencyResult baseline = expected_latency_from_set(net, tolled, solver, baseline_set);
    ExpectedLatencyResult signalled = expected_latency_from_set(net, tolled, solver, signal_set);

    BenefitReport report;
    report.tolled = tolled;
    report.baseline_latency = baseline.value;
    report.signalled_latency = signalled.value;
    report.benefit = baseline.value - signalled.value;
    report.per_signal = std::move(signalled.per_signal);
    report.empty_cells = std::move(signalled.empty_cells);

    BoundConstants constants = bound_constants(net, prior.support());
    CoefficientVector mean = prior.needs_sampling() ? prior_mean(prior, *pool) : prior_mean(prior);
    double distance = l2_distance(mean, prior.support().low());
    double factor = tolled ? constants.xi : constants.theta;
    report.bound_value = distance == 0.0 ? 0.0 : factor * distance;
    report.bound_certified = constants.assumption.holds;

    if (prior.needs_sampling())
        report.mc_stderr = benefit_stderr(net, prior.support(), *pool, signal_set,
                                          baseline.per_signal, report.per_signal);
    return report;
}

}  // namespace

ExpectedLatencyResult expected_latency_under_policy(const Network& net, const Prior& prior,
                                                    const SignallingPolicy& policy, bool tolled,
                                                    const SolverConfig& solver,
                                                    const MonteCarloConfig& mc) {
    return expected_latency_from_set(net, tolled, solver, posterior_summaries(prior, policy, mc));
}

ExpectedLatencyResult expected_latency_under_policy(const Network& net, const Prior& prior,
                                                    const SignallingPolicy& policy, bool tolled,
                                                    const SolverConfig& solver,
                                                    const SamplePool& pool) {
    return expected_latency_from_set(net, tolled, solver, posterior_summaries(prior, policy, pool));
}

BenefitReport benefit(const Network& net, const Prior& prior, const SignallingPolicy& policy,
                      bool tolled, const SolverConfig& solver, const MonteCarloConfig& mc) {
    return benefit_core(net, prior, policy, tolled, solver, nullptr, mc);
}

BenefitReport benefit(const Network& net, const Prior& prior, const SignallingPolicy& policy,
                      bool tolled, const SolverConfig& solver, const SamplePool& pool) {
    return benefit_core(net, prior, policy, tolled, solver, &pool, pool.config());
}

double lipschitz_probe(const Network& net, const CoefficientVector& a, const CoefficientVector& b,
                       bool tolled, const SolverConfig& config) {
    require(a.matches(net) && b.matches(net), "coefficient shape does not match network");
    require(a != b, "probe endpoints must differ");
    double distance = l2_distance(a, b);
    auto value = [&](const CoefficientVector& alpha) {
        EquilibriumResult eq = tolled ? optimal_flow(net, alpha, config) : nash_flow(net, alpha, config);
        return total_latency(net, alpha, eq.flow);
    };
    return (value(a) - value(b)) / distance;
}

}  // namespace congame
