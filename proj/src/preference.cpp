#include "mfgnet/preference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfgnet/errors.hpp"

namespace mfgnet {

namespace {
constexpr double kSimplexTol = 1e-9;
}

std::vector<int> path_entry_times(const Problem& problem, const ValueTable& policy, int path, int i) {
    const auto& edges = problem.paths.path(path);
    std::vector<int> entry(edges.size(), kNever);
    int s = i;
    for (std::size_t pos = 0; pos < edges.size() && s != kNever; ++pos) {
        entry[pos] = s;
        const auto k = static_cast<std::size_t>(problem.paths.pair_index(path, static_cast<int>(pos)));
        s = policy.arrival(k, static_cast<std::size_t>(s));
    }
    return entry;
}

Field path_costs(const Problem& problem, const Congestion& congestion, const ValueTable& policy) {
    const auto& net = problem.network;
    const auto t = problem.grid.nodes();
    const auto last = problem.grid.size() - 1;
    const double alpha = problem.scenario.alpha;
    Field j_table(problem.paths.path_count(), problem.grid.size());
    for (std::size_t p = 0; p < problem.paths.path_count(); ++p) {
        const auto& edges = problem.paths.path(static_cast<int>(p));
        for (std::size_t i = 0; i < problem.grid.size(); ++i) {
            const auto entry = path_entry_times(problem, policy, static_cast<int>(p), static_cast<int>(i));
            double total = 0.0;
            for (std::size_t pos = 0; pos < edges.size(); ++pos) {
                if (entry[pos] == kNever) break;
                const auto s = static_cast<std::size_t>(entry[pos]);
                const auto& edge = net.edge(edges[pos]);
                const auto phi = congestion.integral.row(static_cast<std::size_t>(edges[pos]));
                const auto k = static_cast<std::size_t>(problem.paths.pair_index(static_cast<int>(p), static_cast<int>(pos)));
                const int tau = policy.arrival(k, s);
                if (tau == kNever) {
                    total += (phi[last] - phi[s]) + alpha * net.shortest_remaining_length(edge.tail);
                } else {
                    const auto j = static_cast<std::size_t>(tau);
                    total += (edge.length * edge.length) / (2.0 * (t[j] - t[s])) + (phi[j] - phi[s]);
                }
            }
            j_table(p, i) = total;
        }
    }
    return j_table;
}

std::vector<double> logit_response(std::span<const double> costs, double lambda, double beta) {
    const double jmin = *std::min_element(costs.begin(), costs.end());
    std::vector<double> w(costs.size());
    double sum = 0.0;
    for (std::size_t p = 0; p < costs.size(); ++p) {
        w[p] = std::exp(-beta * (costs[p] - jmin));
        sum += w[p];
    }
    for (double& v : w) v = lambda * (v / sum);
    return w;
}

Field logit_table(const Problem& problem, const Field& costs) {
    Field f(costs.rows(), costs.cols());
    std::vector<double> column(costs.rows());
    for (std::size_t i = 0; i < costs.cols(); ++i) {
        for (std::size_t p = 0; p < costs.rows(); ++p) column[p] = costs(p, i);
        const auto split = logit_response(column, problem.lambda[i], problem.scenario.beta);
        for (std::size_t p = 0; p < costs.rows(); ++p) f(p, i) = split[p];
    }
    return f;
}

namespace {
void check_initial(const Problem& problem, const Field& logit, std::span<const double> z0) {
    if (z0.size() != logit.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "z0 has " + std::to_string(z0.size()) + " entries, expected " +
                                                  std::to_string(logit.rows()));
    }
    double sum = 0.0;
    for (double z : z0) sum += z;
    const double l0 = problem.lambda.front();
    if (std::abs(sum - l0) > kSimplexTol * std::max(1.0, l0)) {
        throw Error(ErrorCode::SimplexViolation,
                    "sum of z0 is " + std::to_string(sum) + ", lambda(0) is " + std::to_string(l0));
    }
}
}  // namespace

Field preference_evolution(const Problem& problem, const Field& logit, std::span<const double> z0) {
    check_initial(problem, logit, z0);
    Field z(logit.rows(), logit.cols());
    const double eta = problem.scenario.eta;
    for (std::size_t p = 0; p < logit.rows(); ++p) {
        const double offset = z0[p] - logit(p, 0);
        for (std::size_t i = 0; i < logit.cols(); ++i) {
            z(p, i) = logit(p, i) + offset * std::exp(-eta * problem.grid.t(static_cast<int>(i)));
        }
    }
    return z;
}

Field preference_euler(const Problem& problem, const Field& logit, std::span<const double> z0) {
    check_initial(problem, logit, z0);
    Field z(logit.rows(), logit.cols());
    const double eta = problem.scenario.eta;
    const double dt = problem.grid.dt();
    for (std::size_t p = 0; p < logit.rows(); ++p) {
        z(p, 0) = z0[p];
        for (std::size_t i = 0; i + 1 < logit.cols(); ++i) {
            z(p, i + 1) = z(p, i) + (logit(p, i + 1) - logit(p, i)) - dt * eta * (z(p, i) - logit(p, i));
        }
    }
    return z;
}

std::size_t count_negative(const Field& z) {
    return static_cast<std::size_t>(std::count_if(z.values().begin(), z.values().end(), [](double v) { return v < 0.0; }));
}

}  // namespace mfgnet
