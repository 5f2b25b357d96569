#pragma once

// Core types for parallel-network congestion games with polynomial latency
// functions. A game is a set of parallel edges between one source and one
// sink, a traffic demand, and per-edge polynomial coefficients over a common
// set of exponents.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace congame {

// Exponent set of the latency polynomials. Degrees are distinct, nonnegative
// and kept sorted ascending.
class DegreeSet {
public:
    explicit DegreeSet(std::vector<int> degrees);
    DegreeSet(std::initializer_list<int> degrees);

    const std::vector<int>& degrees() const { return degrees_; }
    std::size_t size() const { return degrees_.size(); }
    int operator[](std::size_t i) const { return degrees_[i]; }
    bool contains(int degree) const;
    std::optional<std::size_t> index_of(int degree) const;

    bool operator==(const DegreeSet&) const = default;

private:
    std::vector<int> degrees_;
};

// Parallel network. Demand is the total traffic mass routed from source to
// sink; edge_count >= 2 because a single edge leaves nothing to decide.
struct Network {
    std::size_t edge_count;
    DegreeSet degrees;
    double demand;

    Network(std::size_t edge_count, DegreeSet degrees, double demand);

    std::size_t coord_count() const { return edge_count * degrees.size(); }
};

// Dense grid of latency coefficients, one slot per (edge, degree) pair with
// explicit zeros for absent terms. The same shape carries realizations,
// posterior means and support corners.
class CoefficientVector {
public:
    CoefficientVector() = default;
    CoefficientVector(std::size_t edge_count, std::size_t degree_count, double fill = 0.0);

    // Row-per-edge literal, handy in tests: from_rows({{1, 0}, {0, 1}}).
    static CoefficientVector from_rows(std::initializer_list<std::initializer_list<double>> rows);

    double at(std::size_t edge, std::size_t degree_index) const;
    double& at(std::size_t edge, std::size_t degree_index);
    std::span<const double> row(std::size_t edge) const;

    std::size_t edge_count() const { return edge_count_; }
    std::size_t degree_count() const { return degree_count_; }
    std::size_t coord_count() const { return values_.size(); }

    const std::vector<double>& flat() const { return values_; }
    std::vector<double>& flat() { return values_; }

    bool same_shape(const CoefficientVector& other) const;
    bool matches(const Network& net) const;

    bool operator==(const CoefficientVector&) const = default;

private:
    std::size_t edge_count_ = 0;
    std::size_t degree_count_ = 0;
    std::vector<double> values_;
};

double l2_distance(const CoefficientVector& a, const CoefficientVector& b);

// A flow assigns nonnegative mass to every edge; total is the routed demand,
// which the per-edge masses must add up to within solver tolerance.
struct Flow {
    std::vector<double> per_edge;
    double total = 0.0;
};

enum class AssumptionCondition {
    degree_zero_missing,
    degree_one_missing,
    zero_constant_floor,
    zero_linear_floor,
};

struct AssumptionViolation {
    // Edge index for per-edge conditions; empty for degree-set conditions.
    std::optional<std::size_t> edge;
    AssumptionCondition condition;
};

// Result of check_assumption. holds == violations.empty().
struct AssumptionReport {
    bool holds = true;
    std::vector<AssumptionViolation> violations;
};

// Latency of one edge at the given mass: sum of alpha_{e,d} * mass^d.
// The degree-0 term is a constant offset (0^0 == 1).
double edge_latency(const Network& net, const CoefficientVector& alpha,
                    std::size_t edge, double mass);

// Derivative of mass * latency(mass): sum of (d+1) * alpha_{e,d} * mass^d.
double marginal_cost(const Network& net, const CoefficientVector& alpha,
                     std::size_t edge, double mass);

// System cost: sum over edges of f_e * latency_e(f_e).
double total_latency(const Network& net, const CoefficientVector& alpha,
                     const Flow& flow);

// Rescale a game with demand r to an equivalent game with demand 1.
// Coefficients become alpha_{e,d} * r^(d+1); the flow map f -> f/r carries
// equilibria across and leaves the total latency unchanged.
std::pair<Network, CoefficientVector> normalize_demand(const Network& net,
                                                       const CoefficientVector& alpha);

// Positivity floor check on the lower support corner: degrees 0 and 1 must be
// present and every edge needs strictly positive constant and linear floors.
// Report semantics, never throws.
AssumptionReport check_assumption(const Network& net, const CoefficientVector& support_low);

// True when the edge's latency strictly increases with mass, i.e. some
// degree >= 1 coefficient is positive.
bool edge_strictly_increasing(const Network& net, const CoefficientVector& alpha,
                              std::size_t edge);

// x^d for nonnegative integer d with 0^0 == 1.
double pow_int(double x, int d);

}  // namespace congame
