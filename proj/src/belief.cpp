#include "congame/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace congame {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

// Deterministic standard normal source: explicit uniform construction from
// the raw engine plus Box-Muller, so pools are reproducible across standard
// libraries, not only across runs.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Lower-triangular Cholesky factor with a tolerance for semidefinite input.
std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& cov) {
    const std::size_t k = cov.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(cov[i][i]));
    std::vector<std::vector<double>> lower(k, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        double diag = cov[j][j];
        for (std::size_t m = 0; m < j; ++m) diag -= lower[j][m] * lower[j][m];
        if (diag < -1e-9 * std::max(scale, 1.0))
            throw std::invalid_argument("covariance is not positive semidefinite");
        lower[j][j] = std::sqrt(std::max(diag, 0.0));
        for (std::size_t i = j + 1; i < k; ++i) {
            if (lower[j][j] == 0.0) {
                lower[i][j] = 0.0;
                continue;
            }
            double v = cov[i][j];
            for (std::size_t m = 0; m < j; ++m) v -= lower[i][m] * lower[j][m];
            lower[i][j] = v / lower[j][j];
        }
    }
    return lower;
}

}  // namespace

BoxSupport::BoxSupport(CoefficientVector low, CoefficientVector high)
    : low_(std::move(low)), high_(std::move(high)) {
    require(low_.same_shape(high_), "support corners differ in shape");
    for (std::size_t i = 0; i < low_.flat().size(); ++i) {
        require(low_.flat()[i] >= 0.0, "support corner entries must be nonnegative");
        require(low_.flat()[i] <= high_.flat()[i], "support low corner exceeds high corner");
        if (low_.flat()[i] < high_.flat()[i]) random_coords_.push_back(i);
    }
}

Prior Prior::uniform(BoxSupport support) {
    return Prior(PriorKind::uniform_box, std::move(support));
}

Prior Prior::discrete(std::vector<DiscreteAtom> atoms) {
    require(!atoms.empty(), "discrete prior needs at least one atom");
    CoefficientVector low = atoms.front().point;
    CoefficientVector high = atoms.front().point;
    for (const auto& atom : atoms) {
        require(atom.point.same_shape(low), "atoms differ in shape");
        for (std::size_t i = 0; i < low.flat().size(); ++i) {
            low.flat()[i] = std::min(low.flat()[i], atom.point.flat()[i]);
            high.flat()[i] = std::max(high.flat()[i], atom.point.flat()[i]);
        }
    }
    return discrete(BoxSupport(std::move(low), std::move(high)), std::move(atoms));
}

Prior Prior::discrete(BoxSupport support, std::vector<DiscreteAtom> atoms) {
    require(!atoms.empty(), "discrete prior needs at least one atom");
    double mass = 0.0;
    for (const auto& atom : atoms) {
        require(atom.point.same_shape(support.low()), "atom shape does not match support");
        require(atom.probability >= 0.0, "atom probabilities must be nonnegative");
        mass += atom.probability;
        for (std::size_t i = 0; i < atom.point.flat().size(); ++i) {
            double v = atom.point.flat()[i];
            require(v >= support.low().flat()[i] - 1e-12 && v <= support.high().flat()[i] + 1e-12,
                    "atom lies outside the support box");
        }
    }
    require(std::abs(mass - 1.0) <= 1e-12, "atom probabilities must sum to one");
    Prior prior(PriorKind::discrete, std::move(support));
    prior.atoms_ = std::move(atoms);
    return prior;
}

Prior Prior::truncated_gaussian(BoxSupport support, std::vector<double> mean,
                                std::vector<std::vector<double>> covariance) {
    const std::size_t k = support.dimension();
    require(mean.size() == k, "gaussian mean size must match the number of random coordinates");
    require(covariance.size() == k, "covariance must be square over the random coordinates");
    double scale = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        require(covariance[i].size() == k, "covariance must be square over the random coordinates");
        scale = std::max(scale, std::abs(covariance[i][i]));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j)
            require(std::abs(covariance[i][j] - covariance[j][i]) <= 1e-9 * scale,
                    "covariance must be symmetric");
    cholesky(covariance);  // rejects indefinite input
    Prior prior(PriorKind::truncated_gaussian, std::move(support));
    prior.mean_ = std::move(mean);
    prior.covariance_ = std::move(covariance);
    return prior;
}

SignallingPolicy uniform_grid_policy(const BoxSupport& support, int granularity) {
    require(granularity >= 1, "grid granularity must be at least 1");
    const std::size_t k = support.dimension();

    std::size_t cell_count = 1;
    for (std::size_t j = 0; j < k; ++j) {
        cell_count *= static_cast<std::size_t>(granularity);
        require(cell_count <= 10'000'000, "grid has too many cells");
    }

    // Per-coordinate boundaries; the outermost ones are pinned to the exact
    // support corners so boundary realizations stay inside some cell.
    std::vector<std::vector<double>> bounds(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t coord = support.random_coords()[j];
        double lo = support.low().flat()[coord];
        double hi = support.high().flat()[coord];
        bounds[j].resize(static_cast<std::size_t>(granularity) + 1);
        for (int i = 0; i <= granularity; ++i)
            bounds[j][i] = lo + (hi - lo) * (static_cast<double>(i) / granularity);
        bounds[j].front() = lo;
        bounds[j].back() = hi;
    }

    SignallingPolicy policy;
    policy.grid_granularity = granularity;
    policy.cells.reserve(cell_count);
    std::vector<int> idx(k, 0);
    for (std::size_t c = 0; c < cell_count; ++c) {
        PolicyCell cell;
        cell.low.resize(k);
        cell.high.resize(k);
        std::string label = "c";
        for (std::size_t j = 0; j < k; ++j) {
            cell.low[j] = bounds[j][idx[j]];
            cell.high[j] = bounds[j][idx[j] + 1];
            label += (j == 0 ? "" : "_") + std::to_string(idx[j] + 1);
        }
        if (k == 0) label = "c1";
        cell.label = std::move(label);
        policy.cells.push_back(std::move(cell));
        // row-major increment, first coordinate outermost
        for (std::size_t j = k; j-- > 0;) {
            if (++idx[j] < granularity) break;
            idx[j] = 0;
        }
    }
    return policy;
}

SignallingPolicy single_cell_policy(const BoxSupport& support) {
    return uniform_grid_policy(support, 1);
}

namespace {

// Partition sanity for explicit cell lists: inside the box, pairwise
// interior-disjoint, and total volume matching the support box.
void validate_cells(const BoxSupport& support, const SignallingPolicy& policy) {
    const std::size_t k = support.dimension();
    require(!policy.cells.empty(), "policy needs at least one cell");
    if (policy.grid_granularity) return;

    double box_volume = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t coord = support.random_coords()[j];
        box_volume *= support.high().flat()[coord] - support.low().flat()[coord];
    }

    double cells_volume = 0.0;
    for (const auto& cell : policy.cells) {
        require(cell.low.size() == k && cell.high.size() == k,
                "policy cell dimension does not match the support");
        double volume = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t coord = support.random_coords()[j];
            double width = support.high().flat()[coord] - support.low().flat()[coord];
            require(cell.low[j] <= cell.high[j], "policy cell has inverted bounds");
            require(cell.low[j] >= support.low().flat()[coord] - 1e-9 * width &&
                        cell.high[j] <= support.high().flat()[coord] + 1e-9 * width,
                    "policy cell leaves the support box");
            volume *= cell.high[j] - cell.low[j];
        }
        cells_volume += volume;
    }
    require(std::abs(cells_volume - box_volume) <= 1e-9 * std::max(box_volume, 1.0),
            "policy cells do not cover the support box");

    for (std::size_t a = 0; a < policy.cells.size(); ++a)
        for (std::size_t b = a + 1; b < policy.cells.size(); ++b) {
            bool overlaps = true;
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t coord = support.random_coords()[j];
                double width = support.high().flat()[coord] - support.low().flat()[coord];
                double lo = std::max(policy.cells[a].low[j], policy.cells[b].low[j]);
                double hi = std::min(policy.cells[a].high[j], policy.cells[b].high[j]);
                if (hi - lo <= 1e-12 * std::max(width, 1.0)) {
                    overlaps = false;
                    break;
                }
            }
            require(!overlaps, "policy cells overlap");
        }
}

bool cell_contains(const PolicyCell& cell, std::span<const double> point) {
    for (std::size_t j = 0; j < point.size(); ++j)
        if (point[j] < cell.low[j] || point[j] > cell.high[j]) return false;
    return true;
}

// First matching cell in declaration order; shared boundaries go to the
// earlier cell, which keeps assignment deterministic.
std::size_t locate_cell(const SignallingPolicy& policy, const BoxSupport& support,
                        std::span<const double> point) {
    if (policy.grid_granularity) {
        const int b = *policy.grid_granularity;
        std::size_t flat = 0;
        for (std::size_t j = 0; j < point.size(); ++j) {
            std::size_t coord = support.random_coords()[j];
            double lo = support.low().flat()[coord];
            double width = support.high().flat()[coord] - lo;
            double y = (point[j] - lo) / width;
            auto idx = static_cast<long>(y * b);
            idx = std::clamp(idx, 0L, static_cast<long>(b - 1));
            flat = flat * static_cast<std::size_t>(b) + static_cast<std::size_t>(idx);
        }
        return flat;
    }
    for (std::size_t c = 0; c < policy.cells.size(); ++c)
        if (cell_contains(policy.cells[c], point)) return c;
    throw EstimationError("realization not covered by any policy cell");
}

PosteriorSet summaries_uniform(const Prior& prior, const SignallingPolicy& policy) {
    const BoxSupport& support = prior.support();
    const std::size_t k = support.dimension();
    PosteriorSet out;
    for (const auto& cell : policy.cells) {
        double fraction = 1.0;
        CoefficientVector mean = support.low();
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t coord = support.random_coords()[j];
            double lo = std::max(cell.low[j], support.low().flat()[coord]);
            double hi = std::min(cell.high[j], support.high().flat()[coord]);
            double width = support.high().flat()[coord] - support.low().flat()[coord];
            if (hi <= lo) {
                fraction = 0.0;
                break;
            }
            fraction *= (hi - lo) / width;
            mean.flat()[coord] = 0.5 * (lo + hi);
        }
        if (fraction <= 0.0) {
            out.empty_cells.push_back(cell.label);
            continue;
        }
        PosteriorSummary s;
        s.label = cell.label;
        s.cell_probability = fraction;
        s.expected_coeffs = std::move(mean);
        out.summaries.push_back(std::move(s));
    }
    return out;
}

PosteriorSet summaries_discrete(const Prior& prior, const SignallingPolicy& policy) {
    const BoxSupport& support = prior.support();
    const std::size_t k = support.dimension();
    const std::size_t m = policy.cells.size();

    std::vector<double> mass(m, 0.0);
    std::vector<CoefficientVector> weighted(m, CoefficientVector(support.low().edge_count(),
                                                                 support.low().degree_count()));
    std::vector<double> point(k);
    for (const auto& atom : prior.atoms()) {
        for (std::size_t j = 0; j < k; ++j)
            point[j] = atom.point.flat()[support.random_coords()[j]];
        std::size_t c = locate_cell(policy, support, point);
        mass[c] += atom.probability;
        for (std::size_t i = 0; i < atom.point.flat().size(); ++i)
            weighted[c].flat()[i] += atom.probability * atom.point.flat()[i];
    }

    PosteriorSet out;
    for (std::size_t c = 0; c < m; ++c) {
        if (mass[c] <= 0.0) {
            out.empty_cells.push_back(policy.cells[c].label);
            continue;
        }
        PosteriorSummary s;
        s.label = policy.cells[c].label;
        s.cell_probability = mass[c];
        s.expected_coeffs = weighted[c];
        for (double& v : s.expected_coeffs.flat()) v /= mass[c];
        out.summaries.push_back(std::move(s));
    }
    return out;
}

PosteriorSet summaries_sampled(const Prior& prior, const SignallingPolicy& policy,
                               const SamplePool& pool) {
    const BoxSupport& support = prior.support();
    const std::size_t k = support.dimension();
    const std::size_t m = policy.cells.size();
    const std::size_t n = pool.size();

    std::vector<std::size_t> count(m, 0);
    std::vector<std::vector<double>> sum(m, std::vector<double>(k, 0.0));
    std::vector<std::int32_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = pool.sample(i);
        std::size_t c = locate_cell(policy, support, x);
        cell_of[i] = static_cast<std::int32_t>(c);
        ++count[c];
        for (std::size_t j = 0; j < k; ++j) sum[c][j] += x[j];
    }

    std::vector<std::vector<double>> mean(m, std::vector<double>(k, 0.0));
    for (std::size_t c = 0; c < m; ++c)
        if (count[c] > 0)
            for (std::size_t j = 0; j < k; ++j)
                mean[c][j] = sum[c][j] / static_cast<double>(count[c]);

    // second pass for numerically stable per-cell variances
    std::vector<std::vector<double>> sq(m, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        auto x = pool.sample(i);
        auto c = static_cast<std::size_t>(cell_of[i]);
        for (std::size_t j = 0; j < k; ++j) {
            double d = x[j] - mean[c][j];
            sq[c][j] += d * d;
        }
    }

    PosteriorSet out;
    std::vector<std::int32_t> summary_of_cell(m, -1);
    for (std::size_t c = 0; c < m; ++c) {
        if (count[c] == 0) {
            out.empty_cells.push_back(policy.cells[c].label);
            continue;
        }
        PosteriorSummary s;
        s.label = policy.cells[c].label;
        s.cell_probability = static_cast<double>(count[c]) / static_cast<double>(n);
        s.sample_count = count[c];
        s.expected_coeffs = support.low();
        s.standard_error.resize(k, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            s.expected_coeffs.flat()[support.random_coords()[j]] = mean[c][j];
            if (count[c] >= 2) {
                double variance = sq[c][j] / static_cast<double>(count[c] - 1);
                s.standard_error[j] = std::sqrt(variance / static_cast<double>(count[c]));
            } else {
                s.standard_error[j] = std::numeric_limits<double>::infinity();
            }
        }
        summary_of_cell[c] = static_cast<std::int32_t>(out.summaries.size());
        out.summaries.push_back(std::move(s));
    }
    out.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.assignment[i] = summary_of_cell[static_cast<std::size_t>(cell_of[i])];
    return out;
}

}  // namespace

SamplePool SamplePool::build(const Prior& prior, const MonteCarloConfig& mc) {
    require(prior.needs_sampling(), "sample pools are only built for truncated gaussian priors");
    require(mc.samples >= 1, "sample count must be positive");

    const BoxSupport& support = prior.support();
    const std::size_t k = support.dimension();
    auto lower = cholesky(prior.gaussian_covariance());

    SamplePool pool;
    pool.dim_ = k;
    pool.mc_ = mc;
    pool.draws_ = mc.samples;
    pool.values_.reserve(std::min(mc.samples * std::max<std::size_t>(k, 1),
                                  static_cast<std::size_t>(1) << 28));

    GaussianSource normals(mc.seed);
    std::vector<double> u(k), z(k);
    for (std::size_t s = 0; s < mc.samples; ++s) {
        for (std::size_t j = 0; j < k; ++j) u[j] = normals.next();
        bool inside = true;
        for (std::size_t i = 0; i < k; ++i) {
            double v = prior.gaussian_mean()[i];
            for (std::size_t j = 0; j <= i; ++j) v += lower[i][j] * u[j];
            z[i] = v;
            std::size_t coord = support.random_coords()[i];
            if (v < support.low().flat()[coord] || v > support.high().flat()[coord]) {
                inside = false;
                break;
            }
        }
        if (!inside) continue;
        pool.values_.insert(pool.values_.end(), z.begin(), z.end());
        ++pool.count_;
    }
    if (k == 0) pool.count_ = mc.samples;  // degenerate prior: every draw survives

    if (pool.acceptance_rate() < 0.01)
        throw EstimationError("truncation rejected more than 99% of draws");
    if (pool.count_ < 100)
        throw EstimationError("fewer than 100 samples survived truncation");
    return pool;
}

PosteriorSet posterior_summaries(const Prior& prior, const SignallingPolicy& policy,
                                 const MonteCarloConfig& mc) {
    if (prior.needs_sampling()) {
        SamplePool pool = SamplePool::build(prior, mc);
        return posterior_summaries(prior, policy, pool);
    }
    validate_cells(prior.support(), policy);
    return prior.kind() == PriorKind::uniform_box ? summaries_uniform(prior, policy)
                                                  : summaries_discrete(prior, policy);
}

PosteriorSet posterior_summaries(const Prior& prior, const SignallingPolicy& policy,
                                 const SamplePool& pool) {
    validate_cells(prior.support(), policy);
    switch (prior.kind()) {
        case PriorKind::uniform_box:
            return summaries_uniform(prior, policy);
        case PriorKind::discrete:
            return summaries_discrete(prior, policy);
        case PriorKind::truncated_gaussian:
            return summaries_sampled(prior, policy, pool);
    }
    throw std::logic_error("unknown prior kind");
}

namespace {

CoefficientVector analytic_mean(const Prior& prior) {
    const BoxSupport& support = prior.support();
    if (prior.kind() == PriorKind::uniform_box) {
        CoefficientVector mean = support.low();
        for (std::size_t coord : support.random_coords())
            mean.flat()[coord] = 0.5 * (support.low().flat()[coord] + support.high().flat()[coord]);
        return mean;
    }
    CoefficientVector mean(support.low().edge_count(), support.low().degree_count());
    for (const auto& atom : prior.atoms())
        for (std::size_t i = 0; i < mean.flat().size(); ++i)
            mean.flat()[i] += atom.probability * atom.point.flat()[i];
    return mean;
}

}  // namespace

CoefficientVector prior_mean(const Prior& prior, const MonteCarloConfig& mc) {
    if (prior.needs_sampling()) {
        SamplePool pool = SamplePool::build(prior, mc);
        return prior_mean(prior, pool);
    }
    return analytic_mean(prior);
}

CoefficientVector prior_mean(const Prior& prior, const SamplePool& pool) {
    if (!prior.needs_sampling()) return analytic_mean(prior);
    const BoxSupport& support = prior.support();
    CoefficientVector mean = support.low();
    const std::size_t k = pool.dimension();
    std::vector<double> sum(k, 0.0);
    for (std::size_t i = 0; i < pool.size() && k > 0; ++i) {
        auto x = pool.sample(i);
        for (std::size_t j = 0; j < k; ++j) sum[j] += x[j];
    }
    for (std::size_t j = 0; j < k; ++j)
        mean.flat()[support.random_coords()[j]] =
            sum[j] / static_cast<double>(std::max<std::size_t>(pool.size(), 1));
    return mean;
}

}  // namespace congame
