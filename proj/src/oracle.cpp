#include "mfgnet/verify/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "mfgnet/equilibrium.hpp"
#include "mfgnet/errors.hpp"

namespace mfgnet::verify {

namespace {

struct Context {
    const Problem& problem;
    const std::vector<std::vector<double>>& phi;   // per-edge prefix integral, recomputed here
    const IndexTable* lower;
};

std::vector<std::vector<double>> congestion_integrals(const Problem& problem, const Field& mass) {
    const double dt = problem.grid.dt();
    std::vector<std::vector<double>> out;
    for (std::size_t e = 0; e < problem.network.edge_count(); ++e) {
        std::vector<double> cost(problem.grid.size());
        for (std::size_t i = 0; i < cost.size(); ++i) {
            double m = 0.0;
            for (int k : problem.paths.pairs_on_edge(static_cast<int>(e))) m += mass(static_cast<std::size_t>(k), i);
            cost[i] = problem.scenario.congestion[e](m);
        }
        std::vector<double> acc(cost.size(), 0.0);
        for (std::size_t i = 1; i < cost.size(); ++i) acc[i] = acc[i - 1] + 0.5 * dt * (cost[i - 1] + cost[i]);
        out.push_back(std::move(acc));
    }
    return out;
}

double stay_cost(const Context& c, int edge, std::size_t i) {
    const auto& phi = c.phi[static_cast<std::size_t>(edge)];
    const double d = c.problem.network.shortest_remaining_length(c.problem.network.edge(edge).tail);
    return c.problem.scenario.alpha * d + (phi.back() - phi[i]);
}

int first_candidate(const Context& c, int edge, bool last, int i) {
    const int n = c.problem.grid.steps();
    int lo = last ? n : i + 1;
    if (c.lower) lo = std::max(lo, (*c.lower)(static_cast<std::size_t>(edge), static_cast<std::size_t>(i)));
    return lo;
}

/// Costs of every plan that starts on edge `pos` of path p at t_i, excluding
/// the plan that stays on this edge; reported per arrival index j through
/// `each(j, x)` where x is the t_i-independent part of the move cost.
using PlanSink = std::function<void(double)>;
using MoveSink = std::function<void(int, double)>;

void moving_plans(const Context& c, int p, int pos, int i, const MoveSink& each);

/// Every plan cost from (p, pos, i), stay included.
void all_plans(const Context& c, int p, int pos, int i, const PlanSink& each) {
    const int edge = c.problem.paths.path(p)[static_cast<std::size_t>(pos)];
    const auto& phi = c.phi[static_cast<std::size_t>(edge)];
    const double rest = phi.back() - phi[static_cast<std::size_t>(i)];
    each(stay_cost(c, edge, static_cast<std::size_t>(i)));
    moving_plans(c, p, pos, i, [&](int, double x) { each(x + rest); });
}

void moving_plans(const Context& c, int p, int pos, int i, const MoveSink& each) {
    const auto& path = c.problem.paths.path(p);
    const int edge = path[static_cast<std::size_t>(pos)];
    const bool last = static_cast<std::size_t>(pos) + 1 == path.size();
    const int n = c.problem.grid.steps();
    const auto t = c.problem.grid.nodes();
    const auto& phi = c.phi[static_cast<std::size_t>(edge)];
    const double len = c.problem.network.edge(edge).length;
    const double d = c.problem.network.shortest_remaining_length(c.problem.network.edge(edge).tail);
    const double alpha = c.problem.scenario.alpha;
    for (int j = first_candidate(c, edge, last, i); j <= n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double leg = (len * len) / (2.0 * (t[ju] - t[static_cast<std::size_t>(i)]));
        const double tail = phi.back() - phi[ju];
        const PlanSink emit = [&](double cont) { each(j, leg + (cont - tail)); };
        if (last) {
            emit(0.0);
            continue;
        }
        if (j == n) emit(alpha * d);
        all_plans(c, p, pos + 1, j, emit);
    }
}

}  // namespace

ValueTable enumerate_values(const Problem& problem, const Field& mass, const IndexTable* first_admissible) {
    check_mass_shape(problem, mass);
    const auto phi = congestion_integrals(problem, mass);
    const Context c{problem, phi, first_admissible};
    const auto& paths = problem.paths;
    const int n = problem.grid.steps();
    const double eps = problem.scenario.solver.eps_tie;
    const double inf = std::numeric_limits<double>::infinity();
    ValueTable out{Field(paths.pair_count(), problem.grid.size()), IndexTable(paths.pair_count(), problem.grid.size(), kNever)};
    std::vector<double> by_arrival(problem.grid.size());
    for (std::size_t k = 0; k < paths.pair_count(); ++k) {
        const auto& pr = paths.pair(static_cast<int>(k));
        const double stay_base = problem.scenario.alpha *
                                 problem.network.shortest_remaining_length(problem.network.edge(pr.edge).tail);
        for (int i = 0; i <= n; ++i) {
            double v = inf;
            all_plans(c, pr.path, pr.position, i, [&](double cost) { v = std::min(v, cost); });
            out.values(k, static_cast<std::size_t>(i)) = v;
            if (i == n) continue;
            std::fill(by_arrival.begin(), by_arrival.end(), inf);
            moving_plans(c, pr.path, pr.position, i, [&](int j, double x) {
                auto& slot = by_arrival[static_cast<std::size_t>(j)];
                slot = std::min(slot, x);
            });
            const double best = *std::min_element(by_arrival.begin(), by_arrival.end());
            if (best <= stay_base + eps) {
                for (int j = n; j > i; --j) {
                    if (by_arrival[static_cast<std::size_t>(j)] <= best + eps) {
                        out.arrival(k, static_cast<std::size_t>(i)) = j;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

OracleResult run_oracle(const Problem& problem, const Field& mass, bool constrained, int max_steps) {
    if (problem.grid.steps() > max_steps) {
        throw Error(ErrorCode::Validation, "oracle refuses N=" + std::to_string(problem.grid.steps()) +
                                               " (limit " + std::to_string(max_steps) + ")");
    }
    OracleResult result;
    const PsiStages stages = apply_psi(problem, mass, constrained);
    const IndexTable* lower = stages.constraint ? &stages.constraint->first_admissible : nullptr;
    const ValueTable expected = enumerate_values(problem, mass, lower);

    auto note = [&](const char* what, std::size_t k, std::size_t i, double want, double got) {
        if (!result.first) result.first = Mismatch{what, static_cast<int>(k), static_cast<int>(i), want, got};
    };
    for (std::size_t k = 0; k < expected.values.rows(); ++k) {
        for (std::size_t i = 0; i < expected.values.cols(); ++i) {
            ++result.checked;
            const double want = expected.values(k, i);
            const double got = stages.policy.values(k, i);
            const double dev = std::abs(want - got);
            result.max_value_deviation = std::max(result.max_value_deviation, dev);
            if (want != got) note("value", k, i, want, got);
            if (expected.arrival(k, i) != stages.policy.arrival(k, i)) {
                ++result.policy_mismatches;
                note("policy", k, i, arrival_time(problem.grid, expected.arrival(k, i)),
                     arrival_time(problem.grid, stages.policy.arrival(k, i)));
            }
        }
    }

    // Telescoped balance: re-sum psi(mass) with the ledger's own increments.
    const auto& ledger = stages.ledger;
    const double dt = problem.grid.dt();
    std::vector<double> totals(problem.grid.size(), 0.0);
    for (std::size_t i = 0; i < totals.size(); ++i) {
        for (std::size_t k = 0; k < ledger.mass.rows(); ++k) totals[i] += ledger.mass(k, i);
    }
    for (std::size_t i = 0; i + 1 < totals.size(); ++i) {
        const double lhs = (totals[i + 1] + ledger.clipped[i + 1]) - totals[i];
        const double rhs = ledger.inflow[i] - ledger.outflow[i];
        if (lhs != rhs) {
            result.balance_ok = false;
            note("balance", 0, i, rhs, lhs);
        }
        double exit_flow = 0.0;
        for (std::size_t p = 0; p < problem.paths.path_count(); ++p) {
            const int pos = static_cast<int>(problem.paths.path(static_cast<int>(p)).size()) - 1;
            exit_flow += stages.flows(static_cast<std::size_t>(problem.paths.pair_index(static_cast<int>(p), pos)), i);
        }
        result.max_inflow_error = std::max(result.max_inflow_error, std::abs(ledger.inflow[i] - dt * problem.lambda[i]));
        result.max_outflow_error = std::max(result.max_outflow_error, std::abs(ledger.outflow[i] - dt * exit_flow));
    }
    return result;
}

}  // namespace mfgnet::verify
