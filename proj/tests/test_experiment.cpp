#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"

#include "congame/experiment.hpp"

using namespace congame;

TEST_SUITE_BEGIN("bench-cli");

namespace {

const char* kTwoRouteConfig = R"({
  "network": {
    "demand": 1.0,
    "degrees": [0, 2],
    "edge1": {"d0": {"low": 0, "high": 60}, "d2": 1.0},
    "edge2": {"d0": 1.0, "d2": {"low": 0, "high": 60}}
  },
  "prior": {
    "kind": "truncated-gaussian",
    "mean": [30, 30],
    "covariance": [[360, 180], [180, 360]]
  },
  "policy": {"sweep": {"b_min": 1, "b_max": 3}},
  "tolls": "both",
  "monte_carlo": {"seed": 42, "samples": 40000},
  "solver": {"residual_tolerance": 1e-10},
  "output": ""
})";

const char* kPigouConfig = R"({
  "network": {
    "degrees": [0, 1],
    "edge1": {"d0": 1.0},
    "edge2": {"d1": 1.0}
  },
  "policy": {"grid": 1}
})";

}  // namespace

TEST_CASE("configs parse into networks, priors and policies") {
    auto config = parse_config_text(kTwoRouteConfig);
    CHECK(config.edge_count() == 2);
    CHECK(config.degrees == std::vector<int>{0, 2});
    CHECK(config.demand == 1.0);
    CHECK(config.coefficients[0][0].random);
    CHECK(config.coefficients[0][0].high == 60.0);
    CHECK_FALSE(config.coefficients[0][1].random);
    CHECK(config.coefficients[0][1].value == 1.0);
    CHECK(config.random_count() == 2);
    CHECK(config.prior_kind == PriorKind::truncated_gaussian);
    CHECK(config.policy.kind == PolicySpec::Kind::sweep);
    CHECK(config.policy.b_max == 3);
    CHECK(config.mc.samples == 40000);

    Network net = build_network(config);
    CHECK(net.edge_count == 2);
    Prior prior = build_prior(config);
    CHECK(prior.needs_sampling());
    CHECK(prior.support().dimension() == 2);
}

TEST_CASE("missing coefficients default to explicit zeros") {
    auto config = parse_config_text(kPigouConfig);
    BoxSupport support = build_support(config);
    CHECK(support.low() == CoefficientVector::from_rows({{1, 0}, {0, 1}}));
    CHECK(config.random_count() == 0);
}

TEST_CASE("validation errors name the offending field") {
    auto check_fails = [](const std::string& text, const std::string& needle) {
        try {
            parse_config_text(text);
            FAIL_CHECK("expected a config error mentioning " << needle);
        } catch (const ConfigError& err) {
            CHECK_MESSAGE(std::string(err.what()).find(needle) != std::string::npos, err.what());
        }
    };

    check_fails(R"({"network": {"degrees": [0, 1],
                   "edge1": {"d0": -1.0}, "edge2": {"d1": 1.0}}})",
                "network.edge1.d0");
    check_fails(R"({"network": {"degrees": [0, 1],
                   "edge1": {"d3": 1.0}, "edge2": {"d1": 1.0}}})",
                "network.edge1.d3");
    check_fails(R"({"network": {"degrees": [0, 1],
                   "edge1": {"d0": 1.0}, "edge3": {"d1": 1.0}}})",
                "contiguous");
    check_fails(R"({"network": {"degrees": [0, 1],
                   "edge1": {"d0": 1.0}, "edge2": {"d1": 1.0}},
                   "policy": {"sweep": {"b_min": 5, "b_max": 2}}})",
                "b_min");
    check_fails(R"({"network": {"degrees": [0, 1],
                   "edge1": {"d0": {"low": 0, "high": 1}}, "edge2": {"d1": 1.0}}})",
                "prior");
    check_fails(R"({"network": {"degrees": [0, 1], "turbo": true,
                   "edge1": {"d0": 1.0}, "edge2": {"d1": 1.0}}})",
                "network.turbo");
    check_fails(R"({"network": {"degrees": [0, 1],
                   "edge1": {"d0": {"low": 2, "high": 2}}, "edge2": {"d1": 1.0}}})",
                "low < high");
    check_fails("{not json", "invalid JSON");
}

TEST_CASE("dumped configs reparse to the same canonical form") {
    for (const char* text : {kTwoRouteConfig, kPigouConfig}) {
        auto config = parse_config_text(text);
        std::string dumped = dump_config(config);
        auto reparsed = parse_config_text(dumped);
        CHECK(dump_config(reparsed) == dumped);
    }
}

TEST_CASE("solve reports the textbook two-edge instance") {
    auto config = parse_config_text(kPigouConfig);
    auto report = run_solve(config);
    CHECK(report.nash_latency == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.optimal_latency == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(std::abs(report.tolls.per_edge[0]) <= 1e-9);
    CHECK(report.tolls.per_edge[1] == doctest::Approx(0.5));

    std::ostringstream out;
    print_solve_report(out, report);
    CHECK(out.str().find("nash flow") != std::string::npos);
}

TEST_CASE("symmetric instances yield identical nash and optimal flows") {
    auto config = parse_config_text(R"({
      "network": {"degrees": [0, 1],
        "edge1": {"d0": 1.0, "d1": 1.0},
        "edge2": {"d0": 1.0, "d1": 1.0}}
    })");
    auto report = run_solve(config);
    for (std::size_t e = 0; e < 2; ++e)
        CHECK(report.nash.flow.per_edge[e] ==
              doctest::Approx(report.optimal.flow.per_edge[e]).epsilon(1e-9));
}

TEST_CASE("solve refuses random coefficients") {
    auto config = parse_config_text(kTwoRouteConfig);
    CHECK_THROWS_AS(run_solve(config), ConfigError);
}

TEST_CASE("bounds report on the all-ones instance and the quadratic example") {
    auto ones = parse_config_text(R"({
      "network": {"degrees": [0, 1],
        "edge1": {"d0": 1.0, "d1": 1.0},
        "edge2": {"d0": 1.0, "d1": 1.0}}
    })");
    auto report = run_bounds(ones);
    CHECK(report.constants.theta == doctest::Approx(5.0));
    CHECK(report.constants.xi == doctest::Approx(4.0));
    CHECK(report.mean_distance == 0.0);
    CHECK(report.theta_bound_value == 0.0);  // zero-width support

    auto tworoute = parse_config_text(kTwoRouteConfig);
    auto wide = run_bounds(tworoute);
    CHECK_FALSE(wide.constants.assumption.holds);
    CHECK(std::isinf(wide.constants.theta));

    std::ostringstream out;
    print_bounds_report(out, wide);
    CHECK(out.str().find("not certified") != std::string::npos);
}

TEST_CASE("sweeps emit one row per granularity with zero benefit at b=1") {
    auto config = parse_config_text(kTwoRouteConfig);
    auto rows = run_sweep(config);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].b == 1);
    CHECK(rows[0].benefit_untolled == 0.0);
    CHECK(rows[0].benefit_tolled == 0.0);
    for (const auto& row : rows) {
        CHECK(row.error.empty());
        CHECK(row.benefit_untolled ==
              row.baseline_untolled - row.signalled_untolled);
        CHECK(row.benefit_tolled == row.baseline_tolled - row.signalled_tolled);
        CHECK(row.benefit_tolled >= -3.0 * row.mc_stderr);
    }
}

TEST_CASE("sweep CSV output is deterministic for a fixed seed") {
    auto config = parse_config_text(kTwoRouteConfig);
    auto render = [&config]() {
        std::ostringstream out;
        write_csv(out, run_sweep(config), config);
        return out.str();
    };
    std::string first = render();
    std::string second = render();
    CHECK(first == second);

    std::istringstream in(first);
    std::string line;
    std::size_t comments = 0, data = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            ++comments;
            continue;
        }
        if (!saw_header) {
            saw_header = true;
            CHECK(line ==
                  "b,baseline_untolled,signalled_untolled,benefit_untolled,"
                  "baseline_tolled,signalled_tolled,benefit_tolled,"
                  "theta_bound_value,xi_bound_value,mc_stderr");
            continue;
        }
        ++data;
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    }
    CHECK(comments >= 2);
    CHECK(data == 3);
    CHECK(first.find("seed=42") != std::string::npos);
}

TEST_CASE("a deterministic gaussian prior yields zero benefit at every granularity") {
    auto config = parse_config_text(R"({
      "network": {
        "degrees": [0, 2],
        "edge1": {"d0": {"low": 0, "high": 60}, "d2": 1.0},
        "edge2": {"d0": 1.0, "d2": {"low": 0, "high": 60}}
      },
      "prior": {"kind": "truncated-gaussian", "mean": [30, 30],
                "covariance": [[0, 0], [0, 0]]},
      "policy": {"sweep": {"b_min": 1, "b_max": 4}},
      "monte_carlo": {"seed": 1, "samples": 2000}
    })");
    auto rows = run_sweep(config);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.benefit_untolled == 0.0);
        CHECK(row.benefit_tolled == 0.0);
    }
}

TEST_CASE("explicit cell policies come straight from the config") {
    auto config = parse_config_text(R"({
      "network": {
        "degrees": [0, 1],
        "edge1": {"d0": {"low": 0.5, "high": 1.5}, "d1": 0.0},
        "edge2": {"d0": 0.0, "d1": 1.0}
      },
      "prior": {"kind": "discrete", "atoms": [
        {"value": [0.5], "probability": 0.5},
        {"value": [1.5], "probability": 0.5}
      ]},
      "policy": {"cells": [
        {"low": [0.5], "high": [1.0], "label": "lo"},
        {"low": [1.0], "high": [1.5], "label": "hi"}
      ]}
    })");
    SignallingPolicy policy = build_policy(config, 1);
    REQUIRE(policy.cells.size() == 2);
    CHECK(policy.cells[0].label == "lo");

    auto report = benefit(build_network(config), build_prior(config), policy, false);
    CHECK(std::abs(report.benefit - 0.25) <= 1e-9);

    CHECK_THROWS_AS(run_sweep(config), ConfigError);  // sweeps need grid policies
}

TEST_CASE("toll mode limits which sweep columns are computed") {
    auto config = parse_config_text(kTwoRouteConfig);
    config.tolls = TollMode::off;
    config.policy.kind = PolicySpec::Kind::grid;
    config.policy.grid = 2;
    auto rows = run_sweep(config);
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(std::isnan(rows[0].benefit_untolled));
    CHECK(std::isnan(rows[0].benefit_tolled));

    config.tolls = TollMode::on;
    rows = run_sweep(config);
    CHECK(std::isnan(rows[0].benefit_untolled));
    CHECK_FALSE(std::isnan(rows[0].benefit_tolled));
}

TEST_CASE("number formatting round-trips") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_SUITE_END();
