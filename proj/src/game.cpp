#include "congame/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace congame {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

DegreeSet::DegreeSet(std::vector<int> degrees) : degrees_(std::move(degrees)) {
    require(!degrees_.empty(), "degree set must not be empty");
    std::sort(degrees_.begin(), degrees_.end());
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
        require(degrees_[i] >= 0, "degrees must be nonnegative");
        if (i > 0) require(degrees_[i] != degrees_[i - 1], "degrees must be distinct");
    }
}

DegreeSet::DegreeSet(std::initializer_list<int> degrees)
    : DegreeSet(std::vector<int>(degrees)) {}

bool DegreeSet::contains(int degree) const {
    return std::binary_search(degrees_.begin(), degrees_.end(), degree);
}

std::optional<std::size_t> DegreeSet::index_of(int degree) const {
    auto it = std::lower_bound(degrees_.begin(), degrees_.end(), degree);
    if (it == degrees_.end() || *it != degree) return std::nullopt;
    return static_cast<std::size_t>(it - degrees_.begin());
}

Network::Network(std::size_t edge_count_, DegreeSet degrees_, double demand_)
    : edge_count(edge_count_), degrees(std::move(degrees_)), demand(demand_) {
    require(edge_count >= 2, "network needs at least two parallel edges");
    require(demand > 0.0 && std::isfinite(demand), "demand must be positive and finite");
}

CoefficientVector::CoefficientVector(std::size_t edge_count, std::size_t degree_count, double fill)
    : edge_count_(edge_count),
      degree_count_(degree_count),
      values_(edge_count * degree_count, fill) {
    for (double v : values_) require(v >= 0.0, "coefficients must be nonnegative");
}

CoefficientVector CoefficientVector::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
    require(rows.size() > 0, "from_rows needs at least one edge row");
    std::size_t degree_count = rows.begin()->size();
    CoefficientVector out(rows.size(), degree_count);
    std::size_t e = 0;
    for (const auto& row : rows) {
        require(row.size() == degree_count, "edge rows must have equal length");
        std::size_t j = 0;
        for (double v : row) {
            require(v >= 0.0 && std::isfinite(v), "coefficients must be finite and nonnegative");
            out.at(e, j++) = v;
        }
        ++e;
    }
    return out;
}

double CoefficientVector::at(std::size_t edge, std::size_t degree_index) const {
    return values_[edge * degree_count_ + degree_index];
}

double& CoefficientVector::at(std::size_t edge, std::size_t degree_index) {
    return values_[edge * degree_count_ + degree_index];
}

std::span<const double> CoefficientVector::row(std::size_t edge) const {
    return {values_.data() + edge * degree_count_, degree_count_};
}

bool CoefficientVector::same_shape(const CoefficientVector& other) const {
    return edge_count_ == other.edge_count_ && degree_count_ == other.degree_count_;
}

bool CoefficientVector::matches(const Network& net) const {
    return edge_count_ == net.edge_count && degree_count_ == net.degrees.size();
}

double l2_distance(const CoefficientVector& a, const CoefficientVector& b) {
    require(a.same_shape(b), "coefficient vectors differ in shape");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.flat().size(); ++i) {
        double d = a.flat()[i] - b.flat()[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double pow_int(double x, int d) {
    double out = 1.0;
    for (int i = 0; i < d; ++i) out *= x;
    return out;
}

namespace {

void check_edge_args(const Network& net, const CoefficientVector& alpha,
                     std::size_t edge, double mass) {
    require(alpha.matches(net), "coefficient shape does not match network");
    require(edge < net.edge_count, "edge index out of range");
    require(mass >= 0.0, "edge mass must be nonnegative");
}

}  // namespace

double edge_latency(const Network& net, const CoefficientVector& alpha,
                    std::size_t edge, double mass) {
    check_edge_args(net, alpha, edge, mass);
    double out = 0.0;
    for (std::size_t j = 0; j < net.degrees.size(); ++j)
        out += alpha.at(edge, j) * pow_int(mass, net.degrees[j]);
    return out;
}

double marginal_cost(const Network& net, const CoefficientVector& alpha,
                     std::size_t edge, double mass) {
    check_edge_args(net, alpha, edge, mass);
    double out = 0.0;
    for (std::size_t j = 0; j < net.degrees.size(); ++j)
        out += (net.degrees[j] + 1) * alpha.at(edge, j) * pow_int(mass, net.degrees[j]);
    return out;
}

double total_latency(const Network& net, const CoefficientVector& alpha, const Flow& flow) {
    require(flow.per_edge.size() == net.edge_count, "flow shape does not match network");
    double out = 0.0;
    for (std::size_t e = 0; e < net.edge_count; ++e)
        out += flow.per_edge[e] * edge_latency(net, alpha, e, flow.per_edge[e]);
    return out;
}

std::pair<Network, CoefficientVector> normalize_demand(const Network& net,
                                                       const CoefficientVector& alpha) {
    require(net.demand > 0.0, "demand must be positive");
    require(alpha.matches(net), "coefficient shape does not match network");
    CoefficientVector scaled = alpha;
    for (std::size_t e = 0; e < net.edge_count; ++e)
        for (std::size_t j = 0; j < net.degrees.size(); ++j)
            scaled.at(e, j) = alpha.at(e, j) * pow_int(net.demand, net.degrees[j] + 1);
    return {Network(net.edge_count, net.degrees, 1.0), std::move(scaled)};
}

AssumptionReport check_assumption(const Network& net, const CoefficientVector& support_low) {
    AssumptionReport report;
    auto flag = [&report](std::optional<std::size_t> edge, AssumptionCondition cond) {
        report.holds = false;
        report.violations.push_back({edge, cond});
    };

    auto zero_idx = net.degrees.index_of(0);
    auto one_idx = net.degrees.index_of(1);
    if (!zero_idx) flag(std::nullopt, AssumptionCondition::degree_zero_missing);
    if (!one_idx) flag(std::nullopt, AssumptionCondition::degree_one_missing);
    if (!support_low.matches(net)) return report;

    for (std::size_t e = 0; e < net.edge_count; ++e) {
        if (zero_idx && support_low.at(e, *zero_idx) <= 0.0)
            flag(e, AssumptionCondition::zero_constant_floor);
        if (one_idx && support_low.at(e, *one_idx) <= 0.0)
            flag(e, AssumptionCondition::zero_linear_floor);
    }
    return report;
}

bool edge_strictly_increasing(const Network& net, const CoefficientVector& alpha,
                              std::size_t edge) {
    require(alpha.matches(net), "coefficient shape does not match network");
    require(edge < net.edge_count, "edge index out of range");
    for (std::size_t j = 0; j < net.degrees.size(); ++j)
        if (net.degrees[j] >= 1 && alpha.at(edge, j) > 0.0) return true;
    return false;
}

}  // namespace congame
