#include "congame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace congame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared view of the per-edge level function: latency for Nash flows,
// marginal cost for optimal flows. Both are nondecreasing polynomials with
// nonnegative coefficients, so the inverse is a bisection on [0, r].
class LevelProblem {
public:
    LevelProblem(const Network& net, const CoefficientVector& alpha, LevelRule rule)
        : net_(net), alpha_(alpha), rule_(rule) {}

    double eval(std::size_t e, double x) const {
        double out = 0.0;
        for (std::size_t j = 0; j < net_.degrees.size(); ++j) {
            double c = alpha_.at(e, j);
            if (rule_ == LevelRule::marginal_cost) c *= net_.degrees[j] + 1;
            out += c * pow_int(x, net_.degrees[j]);
        }
        return out;
    }

    bool increasing(std::size_t e) const { return edge_strictly_increasing(net_, alpha_, e); }

    // Smallest x in [0, cap] with eval(e, x) == lambda; cap when the level is
    // not reached by cap. Requires eval(e, 0) < lambda.
    double invert(std::size_t e, double lambda, double cap) const {
        if (eval(e, cap) <= lambda) return cap;
        double xlo = 0.0;
        double xhi = cap;
        for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (xlo + xhi);
            double v = eval(e, mid);
            if (v == lambda) return mid;
            (v < lambda ? xlo : xhi) = mid;
            if ((xhi - xlo) <= 1e-17 * std::max(1.0, cap)) break;
        }
        return 0.5 * (xlo + xhi);
    }

private:
    const Network& net_;
    const CoefficientVector& alpha_;
    LevelRule rule_;
};

EquilibriumResult solve_unit_demand(const Network& net, const CoefficientVector& alpha,
                                    LevelRule rule, const SolverConfig& config) {
    const std::size_t n = net.edge_count;
    const double r = net.demand;
    LevelProblem problem(net, alpha, rule);

    std::vector<bool> increasing(n);
    std::vector<double> at_zero(n);
    for (std::size_t e = 0; e < n; ++e) {
        increasing[e] = problem.increasing(e);
        at_zero[e] = problem.eval(e, 0.0);
    }

    std::vector<double> flows(n, 0.0);
    auto mass_at = [&](double lambda) {
        double sum = 0.0;
        for (std::size_t e = 0; e < n; ++e) {
            if (at_zero[e] >= lambda) {
                flows[e] = 0.0;
            } else if (!increasing[e]) {
                flows[e] = r;  // a cheaper constant edge absorbs any mass
            } else {
                flows[e] = problem.invert(e, lambda, r);
            }
            sum += flows[e];
        }
        return sum;
    };

    double lo = kInf;
    double hi = -kInf;
    for (std::size_t e = 0; e < n; ++e) {
        lo = std::min(lo, at_zero[e]);
        hi = std::max(hi, problem.eval(e, r));
    }
    if (!(hi > lo)) hi = lo + std::max(1.0, std::abs(lo));
    for (int grow = 0; grow < 200 && mass_at(hi) < r; ++grow)
        hi = lo + (hi - lo) * config.level_bracket_growth;

    double lambda = hi;
    double best_residual = kInf;
    std::vector<double> best_flows(n, 0.0);
    double best_lambda = hi;
    bool converged = false;
    int iterations = 0;

    for (; iterations < config.max_iterations; ++iterations) {
        lambda = 0.5 * (lo + hi);
        double residual = mass_at(lambda) - r;
        if (std::abs(residual) < best_residual) {
            best_residual = std::abs(residual);
            best_flows = flows;
            best_lambda = lambda;
        }
        if (std::abs(residual) <= config.residual_tolerance) {
            converged = true;
            break;
        }
        (residual < 0.0 ? lo : hi) = lambda;
        if ((hi - lo) <= 1e-17 * std::max(1.0, std::abs(hi))) break;
    }

    flows = best_flows;
    lambda = best_lambda;
    bool degenerate = false;

    // A constant edge caps the level: in equilibrium the common level never
    // exceeds the cheapest constant value. When the level search stalls at a
    // jump, or lands next to that value, pin the level there and hand the
    // residual mass to the tied constant edges (lowest index first).
    std::size_t cheapest_const = n;
    for (std::size_t e = 0; e < n; ++e)
        if (!increasing[e] && (cheapest_const == n || at_zero[e] < at_zero[cheapest_const]))
            cheapest_const = e;

    if (cheapest_const < n) {
        const double c_min = at_zero[cheapest_const];
        const double snap_tol = std::max(hi - lo, 1e-9 * (1.0 + std::abs(lambda)));
        if (!converged || std::abs(c_min - lambda) <= snap_tol) {
            std::vector<double> snapped(n, 0.0);
            double inc_sum = 0.0;
            for (std::size_t e = 0; e < n; ++e) {
                if (!increasing[e] || at_zero[e] >= c_min) continue;
                snapped[e] = problem.invert(e, c_min, r);
                inc_sum += snapped[e];
            }
            double residual_mass = r - inc_sum;
            if (residual_mass >= -10.0 * config.residual_tolerance) {
                const double tie_tol = 1e-12 * (1.0 + std::abs(c_min));
                std::size_t ties = 0;
                for (std::size_t e = 0; e < n; ++e)
                    if (!increasing[e] && std::abs(at_zero[e] - c_min) <= tie_tol) ++ties;
                snapped[cheapest_const] = std::max(0.0, residual_mass);
                flows = std::move(snapped);
                lambda = c_min;
                converged = true;
                degenerate = ties >= 2 && residual_mass > config.residual_tolerance;
            }
        }
    }

    // Residual repair: when the level bracket bottoms out in double precision
    // (square-root-type inverses where the level meets an edge's entry point),
    // hand the leftover mass to the edge whose level moves the least and keep
    // the result only if the equal-level conditions still hold well inside
    // the reporting tolerance.
    if (!converged) {
        double residual_mass = r;
        for (double f : flows) residual_mass -= f;
        std::size_t best_edge = n;
        double best_dev = kInf;
        for (std::size_t e = 0; e < n; ++e) {
            double target = flows[e] + residual_mass;
            if (target < 0.0 || target > r) continue;
            double dev = std::abs(problem.eval(e, target) - lambda);
            if (dev < best_dev) {
                best_dev = dev;
                best_edge = e;
            }
        }
        if (best_edge < n && best_dev <= 1e-9 * (1.0 + std::abs(lambda))) {
            flows[best_edge] += residual_mass;
            converged = true;
        }
    }

    EquilibriumResult result;
    result.flow.per_edge = flows;
    result.flow.total = r;
    result.iterations = iterations;
    result.degenerate = degenerate;
    for (std::size_t e = 0; e < n; ++e)
        if (flows[e] > 0.0) result.used_edges.push_back(e);
    double level = 0.0;
    for (std::size_t e : result.used_edges)
        level = std::max(level, problem.eval(e, flows[e]));
    result.common_level = level;

    if (!converged) throw SolverError("level search did not converge", std::move(result));
    return result;
}

}  // namespace

EquilibriumResult solve_level_equilibrium(const Network& net, const CoefficientVector& alpha,
                                          LevelRule rule, const SolverConfig& config) {
    if (!(config.residual_tolerance > 0.0)) throw std::invalid_argument("residual_tolerance must be positive");
    if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
    if (!(config.level_bracket_growth > 1.0)) throw std::invalid_argument("level_bracket_growth must exceed 1");
    if (!alpha.matches(net)) throw std::invalid_argument("coefficient shape does not match network");

    if (net.demand == 1.0) return solve_unit_demand(net, alpha, rule, config);

    // Solve at unit demand and map back; precision is then relative to the
    // demand instead of absolute in mass units.
    auto [unit_net, unit_alpha] = normalize_demand(net, alpha);
    auto map_back = [&net](EquilibriumResult result) {
        for (double& f : result.flow.per_edge) f *= net.demand;
        result.flow.total = net.demand;
        result.common_level /= net.demand;
        return result;
    };
    try {
        return map_back(solve_unit_demand(unit_net, unit_alpha, rule, config));
    } catch (const SolverError& err) {
        throw SolverError(err.what(), map_back(err.best_iterate()));
    }
}

EquilibriumResult nash_flow(const Network& net, const CoefficientVector& alpha,
                            const SolverConfig& config) {
    return solve_level_equilibrium(net, alpha, LevelRule::latency, config);
}

EquilibriumResult optimal_flow(const Network& net, const CoefficientVector& alpha,
                               const SolverConfig& config) {
    return solve_level_equilibrium(net, alpha, LevelRule::marginal_cost, config);
}

Flow brute_force_best_flow(const Network& net, const CoefficientVector& alpha, int grid_points) {
    if (net.edge_count > 4) throw std::invalid_argument("brute force is limited to 4 edges");
    if (grid_points < 1 || grid_points > 2000)
        throw std::invalid_argument("grid_points must be in [1, 2000]");
    if (!alpha.matches(net)) throw std::invalid_argument("coefficient shape does not match network");

    const std::size_t n = net.edge_count;
    const double r = net.demand;
    const int g = grid_points;

    auto unchecked_total = [&](const std::vector<double>& f) {
        double out = 0.0;
        for (std::size_t e = 0; e < n; ++e) {
            double lat = 0.0;
            for (std::size_t j = 0; j < net.degrees.size(); ++j)
                lat += alpha.at(e, j) * pow_int(f[e], net.degrees[j]);
            out += f[e] * lat;
        }
        return out;
    };

    std::vector<double> f(n, 0.0);
    std::vector<double> best_f(n, 0.0);
    double best = kInf;

    auto step = [&](int ticks) { return r * ticks / g; };
    auto consider = [&]() {
        double v = unchecked_total(f);
        if (v < best) {
            best = v;
            best_f = f;
        }
    };

    // Enumerate integer compositions of g over the edges.
    if (n == 2) {
        for (int i = 0; i <= g; ++i) {
            f[0] = step(i);
            f[1] = step(g - i);
            consider();
        }
    } else if (n == 3) {
        for (int i = 0; i <= g; ++i)
            for (int j = 0; j <= g - i; ++j) {
                f[0] = step(i);
                f[1] = step(j);
                f[2] = step(g - i - j);
                consider();
            }
    } else {
        for (int i = 0; i <= g; ++i)
            for (int j = 0; j <= g - i; ++j)
                for (int k = 0; k <= g - i - j; ++k) {
                    f[0] = step(i);
                    f[1] = step(j);
                    f[2] = step(k);
                    f[3] = step(g - i - j - k);
                    consider();
                }
    }

    return Flow{std::move(best_f), r};
}

}  // namespace congame
