#include "congame/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace congame {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError(field, message);
}

void expect_keys(const json& object, const std::string& field,
                 std::initializer_list<const char*> allowed) {
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known) fail(field + "." + item.key(), "unknown key");
    }
}

double number_at(const json& object, const std::string& field, const std::string& key) {
    if (!object.contains(key)) fail(field + "." + key, "missing required number");
    const json& v = object.at(key);
    if (!v.is_number()) fail(field + "." + key, "expected a number");
    return v.get<double>();
}

CoefficientSpec parse_coefficient(const json& value, const std::string& field) {
    CoefficientSpec spec;
    if (value.is_number()) {
        spec.value = value.get<double>();
        if (spec.value < 0.0) fail(field, "coefficient must be nonnegative");
        return spec;
    }
    if (!value.is_object()) fail(field, "expected a number or {low, high}");
    expect_keys(value, field, {"low", "high"});
    spec.random = true;
    spec.low = number_at(value, field, "low");
    spec.high = number_at(value, field, "high");
    if (spec.low < 0.0) fail(field + ".low", "support interval must stay nonnegative");
    if (!(spec.low < spec.high))
        fail(field, "support interval needs low < high; use a plain number for a fixed value");
    return spec;
}

void parse_network(const json& root, ExperimentConfig& config) {
    if (!root.contains("network")) fail("network", "missing required section");
    const json& net = root.at("network");
    if (!net.is_object()) fail("network", "expected an object");

    if (net.contains("demand")) {
        if (!net.at("demand").is_number()) fail("network.demand", "expected a number");
        config.demand = net.at("demand").get<double>();
        if (!(config.demand > 0.0)) fail("network.demand", "demand must be positive");
    }

    if (!net.contains("degrees")) fail("network.degrees", "missing required array");
    const json& degrees = net.at("degrees");
    if (!degrees.is_array() || degrees.empty()) fail("network.degrees", "expected a nonempty array");
    for (const auto& d : degrees) {
        if (!d.is_number_integer() || d.get<int>() < 0)
            fail("network.degrees", "degrees must be nonnegative integers");
        config.degrees.push_back(d.get<int>());
    }
    try {
        DegreeSet check(config.degrees);
        config.degrees = check.degrees();  // sorted ascending
    } catch (const std::invalid_argument& err) {
        fail("network.degrees", err.what());
    }

    std::vector<std::pair<std::size_t, const json*>> edges;
    for (const auto& item : net.items()) {
        const std::string& key = item.key();
        if (key == "demand" || key == "degrees") continue;
        if (key.rfind("edge", 0) != 0) fail("network." + key, "unknown key");
        std::size_t index = 0;
        auto [ptr, ec] = std::from_chars(key.data() + 4, key.data() + key.size(), index);
        if (ec != std::errc{} || ptr != key.data() + key.size() || index == 0)
            fail("network." + key, "edge keys look like edge1, edge2, ...");
        edges.emplace_back(index, &item.value());
    }
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (edges.size() < 2) fail("network", "need at least two edges");
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].first != i + 1) fail("network", "edge indices must be contiguous from 1");

    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string field = "network.edge" + std::to_string(e + 1);
        const json& entry = *edges[e].second;
        if (!entry.is_object()) fail(field, "expected an object of d<degree> entries");
        std::vector<CoefficientSpec> row(config.degrees.size());
        for (const auto& item : entry.items()) {
            const std::string& key = item.key();
            if (key.empty() || key[0] != 'd') fail(field + "." + key, "unknown key");
            int degree = -1;
            auto [ptr, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), degree);
            if (ec != std::errc{} || ptr != key.data() + key.size())
                fail(field + "." + key, "coefficient keys look like d0, d1, ...");
            auto it = std::find(config.degrees.begin(), config.degrees.end(), degree);
            if (it == config.degrees.end())
                fail(field + "." + key, "degree is not in network.degrees");
            row[static_cast<std::size_t>(it - config.degrees.begin())] =
                parse_coefficient(item.value(), field + "." + key);
        }
        config.coefficients.push_back(std::move(row));
    }
}

void parse_prior(const json& root, ExperimentConfig& config) {
    if (!root.contains("prior")) return;
    config.prior_given = true;
    const json& prior = root.at("prior");
    if (!prior.is_object()) fail("prior", "expected an object");
    if (!prior.contains("kind")) fail("prior.kind", "missing required string");
    const std::string kind = prior.at("kind").is_string() ? prior.at("kind").get<std::string>() : "";

    const std::size_t k = config.random_count();
    if (kind == "uniform-box") {
        expect_keys(prior, "prior", {"kind"});
        config.prior_kind = PriorKind::uniform_box;
    } else if (kind == "discrete") {
        expect_keys(prior, "prior", {"kind", "atoms"});
        config.prior_kind = PriorKind::discrete;
        if (!prior.contains("atoms") || !prior.at("atoms").is_array() || prior.at("atoms").empty())
            fail("prior.atoms", "expected a nonempty array");
        for (std::size_t a = 0; a < prior.at("atoms").size(); ++a) {
            const std::string field = "prior.atoms[" + std::to_string(a) + "]";
            const json& atom = prior.at("atoms").at(a);
            if (!atom.is_object()) fail(field, "expected {value, probability}");
            expect_keys(atom, field, {"value", "probability"});
            AtomSpec spec;
            spec.probability = number_at(atom, field, "probability");
            if (!atom.contains("value") || !atom.at("value").is_array())
                fail(field + ".value", "expected an array");
            for (const auto& v : atom.at("value")) {
                if (!v.is_number()) fail(field + ".value", "expected numbers");
                spec.value.push_back(v.get<double>());
            }
            if (spec.value.size() != k)
                fail(field + ".value", "length must match the number of random coefficients");
            config.prior_atoms.push_back(std::move(spec));
        }
    } else if (kind == "truncated-gaussian") {
        expect_keys(prior, "prior", {"kind", "mean", "covariance"});
        config.prior_kind = PriorKind::truncated_gaussian;
        if (!prior.contains("mean") || !prior.at("mean").is_array())
            fail("prior.mean", "expected an array");
        for (const auto& v : prior.at("mean")) {
            if (!v.is_number()) fail("prior.mean", "expected numbers");
            config.prior_mean_values.push_back(v.get<double>());
        }
        if (config.prior_mean_values.size() != k)
            fail("prior.mean", "length must match the number of random coefficients");
        if (!prior.contains("covariance") || !prior.at("covariance").is_array())
            fail("prior.covariance", "expected a square matrix");
        for (const auto& row : prior.at("covariance")) {
            if (!row.is_array() || row.size() != k)
                fail("prior.covariance", "expected a square matrix over the random coefficients");
            std::vector<double> r;
            for (const auto& v : row) {
                if (!v.is_number()) fail("prior.covariance", "expected numbers");
                r.push_back(v.get<double>());
            }
            config.prior_covariance.push_back(std::move(r));
        }
        if (config.prior_covariance.size() != k)
            fail("prior.covariance", "expected a square matrix over the random coefficients");
    } else {
        fail("prior.kind", "expected uniform-box, discrete or truncated-gaussian");
    }
}

void parse_policy(const json& root, ExperimentConfig& config) {
    if (!root.contains("policy")) return;
    const json& policy = root.at("policy");
    if (!policy.is_object()) fail("policy", "expected an object");
    expect_keys(policy, "policy", {"grid", "sweep", "cells"});
    int choices = (policy.contains("grid") ? 1 : 0) + (policy.contains("sweep") ? 1 : 0) +
                  (policy.contains("cells") ? 1 : 0);
    if (choices != 1) fail("policy", "choose exactly one of grid, sweep, cells");

    if (policy.contains("grid")) {
        config.policy.kind = PolicySpec::Kind::grid;
        if (!policy.at("grid").is_number_integer()) fail("policy.grid", "expected an integer");
        config.policy.grid = policy.at("grid").get<int>();
        if (config.policy.grid < 1) fail("policy.grid", "granularity must be at least 1");
    } else if (policy.contains("sweep")) {
        config.policy.kind = PolicySpec::Kind::sweep;
        const json& sweep = policy.at("sweep");
        if (!sweep.is_object()) fail("policy.sweep", "expected {b_min, b_max}");
        expect_keys(sweep, "policy.sweep", {"b_min", "b_max"});
        for (const char* key : {"b_min", "b_max"})
            if (!sweep.contains(key) || !sweep.at(key).is_number_integer())
                fail(std::string("policy.sweep.") + key, "expected an integer");
        config.policy.b_min = sweep.at("b_min").get<int>();
        config.policy.b_max = sweep.at("b_max").get<int>();
        if (config.policy.b_min < 1) fail("policy.sweep.b_min", "must be at least 1");
        if (config.policy.b_min > config.policy.b_max)
            fail("policy.sweep", "b_min must not exceed b_max");
    } else {
        config.policy.kind = PolicySpec::Kind::cells;
        const json& cells = policy.at("cells");
        if (!cells.is_array() || cells.empty()) fail("policy.cells", "expected a nonempty array");
        const std::size_t k = config.random_count();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string field = "policy.cells[" + std::to_string(c) + "]";
            const json& cell = cells.at(c);
            if (!cell.is_object()) fail(field, "expected {low, high}");
            expect_keys(cell, field, {"low", "high", "label"});
            PolicyCell out;
            for (const char* side : {"low", "high"}) {
                if (!cell.contains(side) || !cell.at(side).is_array() || cell.at(side).size() != k)
                    fail(field + "." + side, "expected an array over the random coefficients");
                for (const auto& v : cell.at(side)) {
                    if (!v.is_number()) fail(field + "." + side, "expected numbers");
                    (side[0] == 'l' ? out.low : out.high).push_back(v.get<double>());
                }
            }
            out.label = cell.contains("label") ? cell.at("label").get<std::string>()
                                               : "c" + std::to_string(c + 1);
            config.policy.cells.push_back(std::move(out));
        }
    }
}

}  // namespace

std::size_t ExperimentConfig::random_count() const {
    std::size_t k = 0;
    for (const auto& row : coefficients)
        for (const auto& spec : row)
            if (spec.random) ++k;
    return k;
}

ExperimentConfig parse_config_text(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        fail("", std::string("invalid JSON: ") + err.what());
    }
    if (!root.is_object()) fail("", "config root must be an object");
    expect_keys(root, "config",
                {"network", "prior", "policy", "tolls", "monte_carlo", "solver", "output"});

    ExperimentConfig config;
    parse_network(root, config);
    parse_prior(root, config);
    parse_policy(root, config);

    if (config.random_count() > 0 && !config.prior_given)
        fail("prior", "random coefficients need a prior");

    if (root.contains("tolls")) {
        const json& tolls = root.at("tolls");
        const std::string mode = tolls.is_string() ? tolls.get<std::string>() : "";
        if (mode == "off")
            config.tolls = TollMode::off;
        else if (mode == "on")
            config.tolls = TollMode::on;
        else if (mode == "both")
            config.tolls = TollMode::both;
        else
            fail("tolls", "expected off, on or both");
    }

    if (root.contains("monte_carlo")) {
        const json& mc = root.at("monte_carlo");
        if (!mc.is_object()) fail("monte_carlo", "expected an object");
        expect_keys(mc, "monte_carlo", {"seed", "samples"});
        if (mc.contains("seed")) {
            if (!mc.at("seed").is_number_integer() || mc.at("seed").get<long long>() < 0)
                fail("monte_carlo.seed", "expected a nonnegative integer");
            config.mc.seed = mc.at("seed").get<std::uint64_t>();
        }
        if (mc.contains("samples")) {
            if (!mc.at("samples").is_number_integer() || mc.at("samples").get<long long>() < 1)
                fail("monte_carlo.samples", "expected a positive integer");
            config.mc.samples = mc.at("samples").get<std::size_t>();
        }
    }

    if (root.contains("solver")) {
        const json& solver = root.at("solver");
        if (!solver.is_object()) fail("solver", "expected an object");
        expect_keys(solver, "solver",
                    {"residual_tolerance", "max_iterations", "level_bracket_growth"});
        if (solver.contains("residual_tolerance")) {
            config.solver.residual_tolerance = number_at(solver, "solver", "residual_tolerance");
            if (!(config.solver.residual_tolerance > 0.0))
                fail("solver.residual_tolerance", "must be positive");
        }
        if (solver.contains("max_iterations")) {
            if (!solver.at("max_iterations").is_number_integer())
                fail("solver.max_iterations", "expected an integer");
            config.solver.max_iterations = solver.at("max_iterations").get<int>();
            if (config.solver.max_iterations < 1) fail("solver.max_iterations", "must be at least 1");
        }
        if (solver.contains("level_bracket_growth")) {
            config.solver.level_bracket_growth = number_at(solver, "solver", "level_bracket_growth");
            if (!(config.solver.level_bracket_growth > 1.0))
                fail("solver.level_bracket_growth", "must exceed 1");
        }
    }

    if (root.contains("output")) {
        if (!root.at("output").is_string()) fail("output", "expected a string");
        config.output = root.at("output").get<std::string>();
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("", "cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string dump_config(const ExperimentConfig& config) {
    json root;
    json net;
    net["demand"] = config.demand;
    net["degrees"] = config.degrees;
    for (std::size_t e = 0; e < config.edge_count(); ++e) {
        json entry;
        for (std::size_t j = 0; j < config.degrees.size(); ++j) {
            const CoefficientSpec& spec = config.coefficients[e][j];
            const std::string key = "d" + std::to_string(config.degrees[j]);
            if (spec.random)
                entry[key] = {{"low", spec.low}, {"high", spec.high}};
            else
                entry[key] = spec.value;
        }
        net["edge" + std::to_string(e + 1)] = std::move(entry);
    }
    root["network"] = std::move(net);

    if (config.prior_given) {
        json prior;
        switch (config.prior_kind) {
            case PriorKind::uniform_box:
                prior["kind"] = "uniform-box";
                break;
            case PriorKind::discrete: {
                prior["kind"] = "discrete";
                json atoms = json::array();
                for (const auto& atom : config.prior_atoms)
                    atoms.push_back({{"value", atom.value}, {"probability", atom.probability}});
                prior["atoms"] = std::move(atoms);
                break;
            }
            case PriorKind::truncated_gaussian:
                prior["kind"] = "truncated-gaussian";
                prior["mean"] = config.prior_mean_values;
                prior["covariance"] = config.prior_covariance;
                break;
        }
        root["prior"] = std::move(prior);
    }

    json policy;
    switch (config.policy.kind) {
        case PolicySpec::Kind::grid:
            policy["grid"] = config.policy.grid;
            break;
        case PolicySpec::Kind::sweep:
            policy["sweep"] = {{"b_min", config.policy.b_min}, {"b_max", config.policy.b_max}};
            break;
        case PolicySpec::Kind::cells: {
            json cells = json::array();
            for (const auto& cell : config.policy.cells)
                cells.push_back({{"low", cell.low}, {"high", cell.high}, {"label", cell.label}});
            policy["cells"] = std::move(cells);
            break;
        }
    }
    root["policy"] = std::move(policy);

    root["tolls"] = config.tolls == TollMode::off ? "off"
                  : config.tolls == TollMode::on  ? "on"
                                                  : "both";
    root["monte_carlo"] = {{"seed", config.mc.seed}, {"samples", config.mc.samples}};
    root["solver"] = {{"residual_tolerance", config.solver.residual_tolerance},
                      {"max_iterations", config.solver.max_iterations},
                      {"level_bracket_growth", config.solver.level_bracket_growth}};
    root["output"] = config.output;
    return root.dump(2) + "\n";
}

Network build_network(const ExperimentConfig& config) {
    return Network(config.edge_count(), DegreeSet(config.degrees), config.demand);
}

BoxSupport build_support(const ExperimentConfig& config) {
    const std::size_t degree_count = config.degrees.size();
    CoefficientVector low(config.edge_count(), degree_count);
    CoefficientVector high(config.edge_count(), degree_count);
    for (std::size_t e = 0; e < config.edge_count(); ++e)
        for (std::size_t j = 0; j < degree_count; ++j) {
            const CoefficientSpec& spec = config.coefficients[e][j];
            low.at(e, j) = spec.random ? spec.low : spec.value;
            high.at(e, j) = spec.random ? spec.high : spec.value;
        }
    return BoxSupport(std::move(low), std::move(high));
}

Prior build_prior(const ExperimentConfig& config) {
    BoxSupport support = build_support(config);
    switch (config.prior_kind) {
        case PriorKind::uniform_box:
            return Prior::uniform(std::move(support));
        case PriorKind::discrete: {
            std::vector<DiscreteAtom> atoms;
            for (const auto& spec : config.prior_atoms) {
                DiscreteAtom atom{support.low(), spec.probability};
                for (std::size_t j = 0; j < spec.value.size(); ++j)
                    atom.point.flat()[support.random_coords()[j]] = spec.value[j];
                atoms.push_back(std::move(atom));
            }
            try {
                return Prior::discrete(std::move(support), std::move(atoms));
            } catch (const std::invalid_argument& err) {
                fail("prior.atoms", err.what());
            }
        }
        case PriorKind::truncated_gaussian:
            try {
                return Prior::truncated_gaussian(std::move(support), config.prior_mean_values,
                                                 config.prior_covariance);
            } catch (const std::invalid_argument& err) {
                fail("prior", err.what());
            }
    }
    throw std::logic_error("unknown prior kind");
}

SignallingPolicy build_policy(const ExperimentConfig& config, int granularity) {
    if (config.policy.kind == PolicySpec::Kind::cells) {
        SignallingPolicy policy;
        policy.cells = config.policy.cells;
        return policy;
    }
    return uniform_grid_policy(build_support(config), granularity);
}

SolveReport run_solve(const ExperimentConfig& config) {
    if (config.random_count() > 0)
        fail("network", "solve needs fully deterministic coefficients; use sweep for priors");
    Network net = build_network(config);
    BoxSupport support = build_support(config);
    const CoefficientVector& alpha = support.low();

    SolveReport report;
    report.nash = nash_flow(net, alpha, config.solver);
    report.nash_latency = total_latency(net, alpha, report.nash.flow);
    report.optimal = optimal_flow(net, alpha, config.solver);
    report.optimal_latency = total_latency(net, alpha, report.optimal.flow);
    report.tolls = optimal_tolls(net, alpha, config.solver);
    report.constants = bound_constants(net, support);
    return report;
}

BoundsReport run_bounds(const ExperimentConfig& config) {
    Network net = build_network(config);
    BoxSupport support = build_support(config);
    BoundsReport report;
    report.constants = bound_constants(net, support);
    CoefficientVector mean =
        config.random_count() == 0 ? support.low() : prior_mean(build_prior(config), config.mc);
    report.mean_distance = l2_distance(mean, support.low());
    report.theta_bound_value =
        report.mean_distance == 0.0 ? 0.0 : report.constants.theta * report.mean_distance;
    report.xi_bound_value =
        report.mean_distance == 0.0 ? 0.0 : report.constants.xi * report.mean_distance;
    return report;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
    if (config.policy.kind == PolicySpec::Kind::cells)
        fail("policy", "sweep needs a grid or sweep policy");
    int b_min = config.policy.kind == PolicySpec::Kind::sweep ? config.policy.b_min
                                                              : config.policy.grid;
    int b_max = config.policy.kind == PolicySpec::Kind::sweep ? config.policy.b_max
                                                              : config.policy.grid;

    Network net = build_network(config);
    Prior prior = build_prior(config);
    std::optional<SamplePool> pool;
    if (prior.needs_sampling()) pool = SamplePool::build(prior, config.mc);

    std::vector<SweepRow> rows;
    for (int b = b_min; b <= b_max; ++b) {
        SweepRow row;
        row.b = b;
        row.baseline_untolled = row.signalled_untolled = row.benefit_untolled = kNan;
        row.baseline_tolled = row.signalled_tolled = row.benefit_tolled = kNan;
        row.theta_bound_value = row.xi_bound_value = kNan;
        row.mc_stderr = 0.0;
        try {
            SignallingPolicy policy = uniform_grid_policy(prior.support(), b);
            if (config.tolls != TollMode::on) {
                BenefitReport r = pool ? benefit(net, prior, policy, false, config.solver, *pool)
                                       : benefit(net, prior, policy, false, config.solver, config.mc);
                row.baseline_untolled = r.baseline_latency;
                row.signalled_untolled = r.signalled_latency;
                row.benefit_untolled = r.benefit;
                row.theta_bound_value = r.bound_value;
                row.mc_stderr = std::max(row.mc_stderr, r.mc_stderr);
                row.empty_cells = std::max(row.empty_cells, r.empty_cells.size());
            }
            if (config.tolls != TollMode::off) {
                BenefitReport r = pool ? benefit(net, prior, policy, true, config.solver, *pool)
                                       : benefit(net, prior, policy, true, config.solver, config.mc);
                row.baseline_tolled = r.baseline_latency;
                row.signalled_tolled = r.signalled_latency;
                row.benefit_tolled = r.benefit;
                row.xi_bound_value = r.bound_value;
                row.mc_stderr = std::max(row.mc_stderr, r.mc_stderr);
                row.empty_cells = std::max(row.empty_cells, r.empty_cells.size());
            }
        } catch (const std::exception& err) {
            row.error = err.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_double(double value) {
    char buffer[64];
    auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

namespace {

std::string format_flow(const Flow& flow) {
    std::string out = "[";
    for (std::size_t e = 0; e < flow.per_edge.size(); ++e)
        out += (e == 0 ? "" : ", ") + format_double(flow.per_edge[e]);
    return out + "]";
}

std::string describe(const AssumptionReport& report) {
    if (report.holds) return "holds";
    std::string out = "fails:";
    for (const auto& v : report.violations) {
        out += ' ';
        switch (v.condition) {
            case AssumptionCondition::degree_zero_missing: out += "degree 0 missing"; break;
            case AssumptionCondition::degree_one_missing: out += "degree 1 missing"; break;
            case AssumptionCondition::zero_constant_floor:
                out += "edge " + std::to_string(*v.edge + 1) + " constant floor is 0";
                break;
            case AssumptionCondition::zero_linear_floor:
                out += "edge " + std::to_string(*v.edge + 1) + " linear floor is 0";
                break;
        }
        out += ';';
    }
    out.pop_back();
    return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows,
               const ExperimentConfig& config) {
    out << "# congbench sweep v" << kToolVersion << "\n";
    out << "# seed=" << config.mc.seed << " samples=" << config.mc.samples << "\n";
    out << "# edges=" << config.edge_count() << " degrees=";
    for (std::size_t j = 0; j < config.degrees.size(); ++j)
        out << (j == 0 ? "" : ",") << config.degrees[j];
    out << " demand=" << format_double(config.demand) << "\n";
    out << "b,baseline_untolled,signalled_untolled,benefit_untolled,"
           "baseline_tolled,signalled_tolled,benefit_tolled,"
           "theta_bound_value,xi_bound_value,mc_stderr\n";
    for (const SweepRow& row : rows) {
        if (!row.error.empty()) out << "# b=" << row.b << " error: " << row.error << "\n";
        out << row.b << ',' << format_double(row.baseline_untolled) << ','
            << format_double(row.signalled_untolled) << ',' << format_double(row.benefit_untolled)
            << ',' << format_double(row.baseline_tolled) << ','
            << format_double(row.signalled_tolled) << ',' << format_double(row.benefit_tolled)
            << ',' << format_double(row.theta_bound_value) << ','
            << format_double(row.xi_bound_value) << ',' << format_double(row.mc_stderr) << "\n";
    }
}

void print_solve_report(std::ostream& out, const SolveReport& report) {
    out << "nash flow:      " << format_flow(report.nash.flow)
        << "  level=" << format_double(report.nash.common_level)
        << "  total latency=" << format_double(report.nash_latency) << "\n";
    out << "optimal flow:   " << format_flow(report.optimal.flow)
        << "  level=" << format_double(report.optimal.common_level)
        << "  total latency=" << format_double(report.optimal_latency) << "\n";
    out << "optimal tolls:  [";
    for (std::size_t e = 0; e < report.tolls.per_edge.size(); ++e)
        out << (e == 0 ? "" : ", ") << format_double(report.tolls.per_edge[e]);
    out << "]\n";
    out << "bound constants: theta=" << format_double(report.constants.theta)
        << " xi=" << format_double(report.constants.xi) << "\n";
    out << "assumption:     " << describe(report.constants.assumption) << "\n";
}

void print_bounds_report(std::ostream& out, const BoundsReport& report) {
    const BoundConstants& c = report.constants;
    out << "rho0_minus=" << format_double(c.rho0_minus)
        << " rho1_minus=" << format_double(c.rho1_minus)
        << " rho_plus=" << format_double(c.rho_plus) << "\n";
    out << "theta=" << format_double(c.theta) << " xi=" << format_double(c.xi) << "\n";
    out << "mean distance to support low: " << format_double(report.mean_distance) << "\n";
    out << "theta bound value: " << format_double(report.theta_bound_value) << "\n";
    out << "xi bound value:    " << format_double(report.xi_bound_value) << "\n";
    out << "assumption: " << describe(c.assumption)
        << (c.assumption.holds ? "" : " (bound values not certified)") << "\n";
}

}  // namespace congame
