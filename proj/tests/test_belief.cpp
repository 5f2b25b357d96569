#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "test_support.hpp"

using namespace congame;
using namespace testsupport;

TEST_SUITE_BEGIN("belief-engine");

namespace {

// Support with two random coordinates on [0, 1]: the first edge's constant
// term and the second edge's linear term.
BoxSupport unit_square_support() {
    return BoxSupport(CoefficientVector::from_rows({{0, 0}, {0, 0}}),
                      CoefficientVector::from_rows({{1, 0}, {0, 1}}));
}

}  // namespace

TEST_CASE("box support validation and random coordinates") {
    auto support = unit_square_support();
    CHECK(support.dimension() == 2);
    CHECK(support.random_coords() == std::vector<std::size_t>{0, 3});

    CHECK_THROWS_AS(BoxSupport(CoefficientVector::from_rows({{2, 0}, {0, 0}}),
                               CoefficientVector::from_rows({{1, 0}, {0, 1}})),
                    std::invalid_argument);
}

TEST_CASE("uniform grid policies cover the box cell by cell") {
    auto support = unit_square_support();

    auto none = uniform_grid_policy(support, 1);
    REQUIRE(none.cells.size() == 1);
    CHECK(none.cells[0].low == std::vector<double>{0.0, 0.0});
    CHECK(none.cells[0].high == std::vector<double>{1.0, 1.0});

    BoxSupport wide(CoefficientVector::from_rows({{0, 0}, {0, 0}}),
                    CoefficientVector::from_rows({{60, 0}, {0, 60}}));
    auto four = uniform_grid_policy(wide, 2);
    REQUIRE(four.cells.size() == 4);
    CHECK(four.cells[0].low == std::vector<double>{0.0, 0.0});
    CHECK(four.cells[0].high == std::vector<double>{30.0, 30.0});
    CHECK(four.cells[3].high == std::vector<double>{60.0, 60.0});

    auto nine = uniform_grid_policy(support, 3);
    REQUIRE(nine.cells.size() == 9);
    for (const auto& cell : nine.cells)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(cell.high[j] - cell.low[j] == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(uniform_grid_policy(support, 0), std::invalid_argument);
}

TEST_CASE("uniform prior posteriors are cell midpoints with volume weights") {
    auto prior = Prior::uniform(unit_square_support());
    auto set = posterior_summaries(prior, uniform_grid_policy(prior.support(), 2));
    REQUIRE(set.summaries.size() == 4);
    double total = 0.0;
    for (const auto& s : set.summaries) {
        CHECK(s.cell_probability == doctest::Approx(0.25));
        total += s.cell_probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(set.summaries[0].expected_coeffs.flat()[0] == doctest::Approx(0.25));
    CHECK(set.summaries[0].expected_coeffs.flat()[3] == doctest::Approx(0.25));
}

TEST_CASE("discrete posteriors assign atoms to their cells") {
    auto example = make_two_atom_example();
    auto policy = uniform_grid_policy(example.prior.support(), 2);  // split at 1.0
    auto set = posterior_summaries(example.prior, policy);
    REQUIRE(set.summaries.size() == 2);
    CHECK(set.summaries[0].cell_probability == doctest::Approx(0.5));
    CHECK(set.summaries[1].cell_probability == doctest::Approx(0.5));
    CHECK(set.summaries[0].expected_coeffs == CoefficientVector::from_rows({{0.5, 0}, {0, 1}}));
    CHECK(set.summaries[1].expected_coeffs == CoefficientVector::from_rows({{1.5, 0}, {0, 1}}));
}

TEST_CASE("prior means: uniform midpoint, discrete atom average") {
    auto uniform_prior = Prior::uniform(unit_square_support());
    auto mean = prior_mean(uniform_prior);
    CHECK(mean.flat()[0] == doctest::Approx(0.5));
    CHECK(mean.flat()[3] == doctest::Approx(0.5));

    auto example = make_two_atom_example();
    auto atom_mean = prior_mean(example.prior);
    CHECK(atom_mean.at(0, 0) == doctest::Approx(1.0));
    CHECK(atom_mean.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("truncated gaussian posteriors center on the mean under no information") {
    auto example = make_two_route_example();
    MonteCarloConfig mc{42, 200'000};
    SamplePool pool = SamplePool::build(example.prior, mc);
    auto set = posterior_summaries(example.prior, single_cell_policy(example.prior.support()), pool);
    REQUIRE(set.summaries.size() == 1);
    const auto& s = set.summaries[0];
    CHECK(s.cell_probability == doctest::Approx(1.0));
    CHECK(s.sample_count == pool.size());
    // truncation is symmetric around the mean, so the conditional mean stays
    // at (30, 30) up to Monte Carlo noise
    CHECK(std::abs(s.expected_coeffs.flat()[0] - 30.0) <= 3.0 * s.standard_error[0]);
    CHECK(std::abs(s.expected_coeffs.flat()[3] - 30.0) <= 3.0 * s.standard_error[1]);

    auto mean = prior_mean(example.prior, pool);
    CHECK(std::abs(mean.flat()[0] - 30.0) <= 3.0 * s.standard_error[0]);
}

TEST_CASE("law of total expectation holds cell by cell") {
    SUBCASE("analytic priors") {
        auto prior = Prior::uniform(unit_square_support());
        auto set = posterior_summaries(prior, uniform_grid_policy(prior.support(), 3));
        auto mean = prior_mean(prior);
        for (std::size_t coord = 0; coord < mean.flat().size(); ++coord) {
            double mixed = 0.0;
            for (const auto& s : set.summaries)
                mixed += s.cell_probability * s.expected_coeffs.flat()[coord];
            CHECK(std::abs(mixed - mean.flat()[coord]) <= 1e-12);
        }
    }
    SUBCASE("shared-pool Monte Carlo") {
        auto example = make_two_route_example();
        SamplePool pool = SamplePool::build(example.prior, {42, 100'000});
        auto set = posterior_summaries(example.prior, uniform_grid_policy(example.prior.support(), 4), pool);
        auto mean = prior_mean(example.prior, pool);
        for (std::size_t coord : example.prior.support().random_coords()) {
            double mixed = 0.0;
            for (const auto& s : set.summaries)
                mixed += s.cell_probability * s.expected_coeffs.flat()[coord];
            CHECK(std::abs(mixed - mean.flat()[coord]) <= 1e-10 * 30.0);
        }
    }
}

TEST_CASE("nested grids aggregate exactly on the shared pool") {
    auto example = make_two_route_example();
    SamplePool pool = SamplePool::build(example.prior, {42, 50'000});
    for (int b : {2, 3}) {
        auto coarse = posterior_summaries(example.prior, uniform_grid_policy(example.prior.support(), b), pool);
        auto fine = posterior_summaries(example.prior, uniform_grid_policy(example.prior.support(), 2 * b), pool);
        // sample counts of the four children must add up to the parent's
        for (const auto& parent : coarse.summaries) {
            // parent label "ci_j" with 1-based indices
            auto sep = parent.label.find('_');
            int i = std::stoi(parent.label.substr(1, sep - 1));
            int j = std::stoi(parent.label.substr(sep + 1));
            std::size_t child_total = 0;
            for (int di = 0; di < 2; ++di)
                for (int dj = 0; dj < 2; ++dj) {
                    std::string child_label = "c" + std::to_string(2 * (i - 1) + di + 1) + "_" +
                                              std::to_string(2 * (j - 1) + dj + 1);
                    for (const auto& child : fine.summaries)
                        if (child.label == child_label) child_total += child.sample_count;
                }
            CHECK(child_total == parent.sample_count);
        }
    }
}

TEST_CASE("identical seeds reproduce summaries bit for bit") {
    auto example = make_two_route_example();
    MonteCarloConfig mc{7, 20'000};
    auto a = posterior_summaries(example.prior, uniform_grid_policy(example.prior.support(), 3), mc);
    auto b = posterior_summaries(example.prior, uniform_grid_policy(example.prior.support(), 3), mc);
    REQUIRE(a.summaries.size() == b.summaries.size());
    for (std::size_t i = 0; i < a.summaries.size(); ++i) {
        CHECK(a.summaries[i].cell_probability == b.summaries[i].cell_probability);
        CHECK(a.summaries[i].expected_coeffs == b.summaries[i].expected_coeffs);
        CHECK(a.summaries[i].sample_count == b.summaries[i].sample_count);
    }
}

TEST_CASE("estimation guard rails") {
    // nearly all mass outside the box: acceptance below 1%
    BoxSupport narrow(CoefficientVector::from_rows({{0, 0}, {0, 0}}),
                      CoefficientVector::from_rows({{1, 0}, {0, 1}}));
    auto outside = Prior::truncated_gaussian(narrow, {50.0, 50.0}, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(SamplePool::build(outside, {42, 10'000}), EstimationError);

    // too few survivors even at full acceptance
    auto example = make_two_route_example();
    CHECK_THROWS_AS(SamplePool::build(example.prior, {42, 50}), EstimationError);
}

TEST_CASE("zero covariance behaves like a point mass") {
    auto example = make_two_route_example();
    auto degenerate = Prior::truncated_gaussian(example.support, {30.0, 30.0},
                                                {{0.0, 0.0}, {0.0, 0.0}});
    SamplePool pool = SamplePool::build(degenerate, {42, 1'000});
    auto set = posterior_summaries(degenerate, uniform_grid_policy(degenerate.support(), 4), pool);
    REQUIRE(set.summaries.size() == 1);
    CHECK(set.summaries[0].cell_probability == doctest::Approx(1.0));
    CHECK(set.summaries[0].expected_coeffs.flat()[0] == doctest::Approx(30.0));
    CHECK(set.empty_cells.size() == 15);
}

TEST_CASE("empty corner cells are dropped while probabilities still sum to one") {
    auto example = make_two_route_example();
    SamplePool pool = SamplePool::build(example.prior, {42, 50'000});
    auto policy = uniform_grid_policy(example.prior.support(), 16);
    auto set = posterior_summaries(example.prior, policy, pool);
    CHECK(set.summaries.size() + set.empty_cells.size() == 256);
    double total = 0.0;
    for (const auto& s : set.summaries) total += s.cell_probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // posterior means stay inside their cells
    for (const auto& s : set.summaries) {
        const PolicyCell* cell = nullptr;
        for (const auto& candidate : policy.cells)
            if (candidate.label == s.label) cell = &candidate;
        REQUIRE(cell != nullptr);
        for (std::size_t j = 0; j < 2; ++j) {
            std::size_t coord = example.prior.support().random_coords()[j];
            CHECK(s.expected_coeffs.flat()[coord] >= cell->low[j]);
            CHECK(s.expected_coeffs.flat()[coord] <= cell->high[j]);
        }
    }
}

TEST_CASE("explicit cell lists are validated as partitions") {
    auto example = make_two_atom_example();
    SignallingPolicy overlapping;
    overlapping.cells = {{{0.5}, {1.2}, "a"}, {{1.0}, {1.5}, "b"}};
    CHECK_THROWS_AS(posterior_summaries(example.prior, overlapping), std::invalid_argument);

    SignallingPolicy gap;
    gap.cells = {{{0.5}, {0.8}, "a"}, {{1.2}, {1.5}, "b"}};
    CHECK_THROWS_AS(posterior_summaries(example.prior, gap), std::invalid_argument);

    SignallingPolicy good;
    good.cells = {{{0.5}, {1.0}, "lo"}, {{1.0}, {1.5}, "hi"}};
    auto set = posterior_summaries(example.prior, good);
    CHECK(set.summaries.size() == 2);
    CHECK(set.summaries[0].label == "lo");
}

TEST_CASE("discrete priors are validated") {
    auto point = CoefficientVector::from_rows({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(Prior::discrete({DiscreteAtom{point, 0.7}}), std::invalid_argument);
    CHECK_THROWS_AS(Prior::discrete({DiscreteAtom{point, 0.5}, DiscreteAtom{point, 0.6}}),
                    std::invalid_argument);
    auto ok = Prior::discrete({DiscreteAtom{point, 0.5}, DiscreteAtom{point, 0.5}});
    CHECK(ok.support().dimension() == 0);
}

TEST_CASE("gaussian priors are validated") {
    auto support = unit_square_support();
    CHECK_THROWS_AS(Prior::truncated_gaussian(support, {0.5}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Prior::truncated_gaussian(support, {0.5, 0.5}, {{1.0, 0.5}, {0.4, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Prior::truncated_gaussian(support, {0.5, 0.5}, {{1.0, 3.0}, {3.0, 1.0}}),
                    std::invalid_argument);
}

TEST_SUITE_END();
