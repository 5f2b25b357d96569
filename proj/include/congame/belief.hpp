#pragma once

// Beliefs over latency coefficients and partition-based signalling policies.
// A prior lives on a box support; coordinates with zero support width are
// deterministic and excluded from the sampling space. Signalling policies
// partition the random coordinates into axis-aligned cells; posteriors are
// closed-form for uniform and discrete priors and Monte Carlo estimates on a
// shared sample pool for the truncated Gaussian.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "congame/game.hpp"

namespace congame {

struct MonteCarloConfig {
    std::uint64_t seed = 42;
    std::size_t samples = 1'000'000;
};

class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Componentwise corners of the smallest box containing the prior's support.
class BoxSupport {
public:
    BoxSupport(CoefficientVector low, CoefficientVector high);

    const CoefficientVector& low() const { return low_; }
    const CoefficientVector& high() const { return high_; }

    // Flat indices of coordinates with strictly positive width, ascending.
    const std::vector<std::size_t>& random_coords() const { return random_coords_; }
    std::size_t dimension() const { return random_coords_.size(); }

private:
    CoefficientVector low_;
    CoefficientVector high_;
    std::vector<std::size_t> random_coords_;
};

enum class PriorKind { uniform_box, discrete, truncated_gaussian };

struct DiscreteAtom {
    CoefficientVector point;
    double probability;
};

class Prior {
public:
    static Prior uniform(BoxSupport support);
    // Support defaults to the componentwise envelope of the atoms.
    static Prior discrete(std::vector<DiscreteAtom> atoms);
    static Prior discrete(BoxSupport support, std::vector<DiscreteAtom> atoms);
    // Mean and covariance are over the support's random coordinates, in
    // ascending flat-coordinate order. Mass outside the box is rejected.
    static Prior truncated_gaussian(BoxSupport support, std::vector<double> mean,
                                    std::vector<std::vector<double>> covariance);

    PriorKind kind() const { return kind_; }
    const BoxSupport& support() const { return support_; }
    const std::vector<DiscreteAtom>& atoms() const { return atoms_; }
    const std::vector<double>& gaussian_mean() const { return mean_; }
    const std::vector<std::vector<double>>& gaussian_covariance() const { return covariance_; }
    bool needs_sampling() const { return kind_ == PriorKind::truncated_gaussian; }

private:
    Prior(PriorKind kind, BoxSupport support) : kind_(kind), support_(std::move(support)) {}

    PriorKind kind_;
    BoxSupport support_;
    std::vector<DiscreteAtom> atoms_;
    std::vector<double> mean_;
    std::vector<std::vector<double>> covariance_;
};

// One cell of a signalling policy: an axis-aligned box over the random
// coordinates of the support.
struct PolicyCell {
    std::vector<double> low;
    std::vector<double> high;
    std::string label;
};

struct SignallingPolicy {
    std::vector<PolicyCell> cells;
    // Set when the cells form a uniform grid; enables exact nested-grid
    // aggregation of sample assignments.
    std::optional<int> grid_granularity;
};

// Partition of the support box into granularity^k equal cells, k the number
// of random coordinates. granularity == 1 is the no-information policy.
SignallingPolicy uniform_grid_policy(const BoxSupport& support, int granularity);
SignallingPolicy single_cell_policy(const BoxSupport& support);

struct PosteriorSummary {
    std::string label;
    double cell_probability = 0.0;
    CoefficientVector expected_coeffs;
    std::size_t sample_count = 0;        // Monte Carlo only
    std::vector<double> standard_error;  // per random coordinate, Monte Carlo only
};

// Box-truncated Gaussian sample pool. Built once per experiment and shared
// across every policy evaluated against the prior, so that refinements and
// baselines see common random numbers.
class SamplePool {
public:
    static SamplePool build(const Prior& prior, const MonteCarloConfig& mc);

    std::size_t size() const { return count_; }
    std::size_t dimension() const { return dim_; }
    std::span<const double> sample(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }
    std::size_t draws() const { return draws_; }
    double acceptance_rate() const {
        return draws_ == 0 ? 1.0 : static_cast<double>(count_) / static_cast<double>(draws_);
    }
    const MonteCarloConfig& config() const { return mc_; }

private:
    SamplePool() = default;

    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::size_t draws_ = 0;
    MonteCarloConfig mc_;
    std::vector<double> values_;  // row-major count x dim
};

struct PosteriorSet {
    std::vector<PosteriorSummary> summaries;  // nonempty cells, in cell order
    std::vector<std::string> empty_cells;
    // Monte Carlo only: pool sample index -> index into summaries.
    std::vector<std::int32_t> assignment;
};

PosteriorSet posterior_summaries(const Prior& prior, const SignallingPolicy& policy,
                                 const MonteCarloConfig& mc = {});
PosteriorSet posterior_summaries(const Prior& prior, const SignallingPolicy& policy,
                                 const SamplePool& pool);

CoefficientVector prior_mean(const Prior& prior, const MonteCarloConfig& mc = {});
CoefficientVector prior_mean(const Prior& prior, const SamplePool& pool);

}  // namespace congame
