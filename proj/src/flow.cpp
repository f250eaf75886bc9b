#include "mfgnet/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "mfgnet/errors.hpp"

namespace mfgnet {

std::vector<int> uniform_delays(const Problem& problem) {
    return std::vector<int>(problem.network.edge_count(), compute_k_steps(problem));
}

std::vector<double> local_decision(const Problem& problem, std::span<const double> z) {
    double sum = 0.0;
    for (double v : z) sum += v;
    if (!(sum > 0.0)) throw Error(ErrorCode::DegenerateSimplex, "preference total is not positive");
    std::vector<double> g(problem.paths.pair_count(), 0.0);
    for (std::size_t p = 0; p < problem.paths.path_count(); ++p) {
        g[static_cast<std::size_t>(problem.paths.pair_index(static_cast<int>(p), 0))] = z[p] / sum;
    }
    return g;
}

namespace {

std::vector<double> column(const Field& f, std::size_t i) {
    std::vector<double> c(f.rows());
    for (std::size_t r = 0; r < f.rows(); ++r) c[r] = f(r, i);
    return c;
}

void check_delays(const Problem& problem, std::span<const int> delays) {
    if (delays.size() != problem.network.edge_count()) {
        throw Error(ErrorCode::ShapeMismatch, "one delay per edge expected");
    }
}

}  // namespace

Field compute_flows(const Problem& problem, const ValueTable& policy, const Field& z, std::span<const int> delays) {
    check_delays(problem, delays);
    const auto& paths = problem.paths;
    const std::size_t nodes = problem.grid.size();
    Field g(paths.pair_count(), nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const auto gi = local_decision(problem, column(z, i));
        for (std::size_t k = 0; k < gi.size(); ++k) g(k, i) = gi[k];
    }
    Field f(paths.pair_count(), nodes);
    for (std::size_t p = 0; p < paths.path_count(); ++p) {
        const auto& edges = paths.path(static_cast<int>(p));
        for (std::size_t pos = 0; pos < edges.size(); ++pos) {
            const auto k = static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), static_cast<int>(pos)));
            const auto delay = static_cast<std::size_t>(delays[static_cast<std::size_t>(edges[pos])]);
            for (std::size_t i = delay; i < nodes; ++i) {
                const std::size_t src = i - delay;
                if (policy.arrival(k, src) == kNever) continue;
                if (pos == 0) {
                    f(k, i) = problem.lambda[src] * g(k, src);
                } else {
                    f(k, i) = f(k - 1, src);
                }
            }
        }
    }
    return f;
}

Field mass_rhs(const Problem& problem, const Field& flows, const Field& z) {
    const auto& paths = problem.paths;
    Field h(paths.pair_count(), problem.grid.size());
    for (std::size_t i = 0; i < problem.grid.size(); ++i) {
        const auto g = local_decision(problem, column(z, i));
        for (std::size_t k = 0; k < paths.pair_count(); ++k) {
            const double upstream = paths.pair(static_cast<int>(k)).position == 0 ? 0.0 : flows(k - 1, i);
            h(k, i) = problem.lambda[i] * g[k] + upstream - flows(k, i);
        }
    }
    return h;
}

double mass_quantum(const Problem& problem) {
    const double span = 4.0 * problem.scenario.rho_max * static_cast<double>(problem.paths.pair_count());
    return std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(span))) - 52);
}

std::vector<double> initial_mass(const Problem& problem) {
    std::vector<double> rho(problem.paths.pair_count(), 0.0);
    for (std::size_t k = 0; k < rho.size(); ++k) {
        auto it = problem.scenario.rho0.find(problem.pair_label(static_cast<int>(k)));
        if (it != problem.scenario.rho0.end()) rho[k] = it->second;
    }
    return rho;
}

namespace {

double snap(double x, double q) { return std::nearbyint(x / q) * q; }

MassLedger start_ledger(const Problem& problem) {
    const std::size_t nodes = problem.grid.size();
    MassLedger ledger;
    ledger.mass = Field(problem.paths.pair_count(), nodes);
    ledger.inflow.assign(nodes - 1, 0.0);
    ledger.outflow.assign(nodes - 1, 0.0);
    ledger.clipped.assign(nodes, 0.0);
    ledger.quantum = mass_quantum(problem);
    const auto rho0 = initial_mass(problem);
    for (std::size_t k = 0; k < rho0.size(); ++k) ledger.mass(k, 0) = snap(rho0[k], ledger.quantum);
    return ledger;
}

/// Applies pair increments for step i -> i+1, clips and checks the edge bound.
/// The caller books inflow[i] and outflow[i].
void advance(const Problem& problem, MassLedger& ledger, std::size_t i, std::span<const double> in,
             std::span<const double> out) {
    const auto& paths = problem.paths;
    for (std::size_t k = 0; k < paths.pair_count(); ++k) {
        double next = ledger.mass(k, i) + in[k] - out[k];
        if (next < 0.0) {
            ledger.clipped[i + 1] -= next;
            ledger.max_clip = std::max(ledger.max_clip, -next);
            ++ledger.clip_count;
            next = 0.0;
        }
        ledger.mass(k, i + 1) = next;
    }
    for (std::size_t e = 0; e < problem.network.edge_count(); ++e) {
        double total = 0.0;
        for (int k : paths.pairs_on_edge(static_cast<int>(e))) total += ledger.mass(static_cast<std::size_t>(k), i + 1);
        if (total > problem.scenario.rho_max) {
            throw Error(ErrorCode::MassBoundExceeded, "mass on edge " + problem.network.edge(static_cast<int>(e)).id +
                                                          " reaches " + std::to_string(total) + " at t=" +
                                                          std::to_string(problem.grid.t(static_cast<int>(i + 1))));
        }
    }
}

}  // namespace

MassLedger integrate_mass(const Problem& problem, const Field& rhs) {
    check_mass_shape(problem, rhs);
    MassLedger ledger = start_ledger(problem);
    const auto& paths = problem.paths;
    const double dt = problem.grid.dt();
    std::vector<double> in(paths.pair_count());
    std::vector<double> out(paths.pair_count());
    for (std::size_t i = 0; i + 1 < problem.grid.size(); ++i) {
        for (std::size_t k = 0; k < paths.pair_count(); ++k) {
            const double step = snap(dt * rhs(k, i), ledger.quantum);
            in[k] = std::max(step, 0.0);
            out[k] = std::max(-step, 0.0);
            ledger.inflow[i] += in[k];
            ledger.outflow[i] += out[k];
        }
        advance(problem, ledger, i, in, out);
    }
    return ledger;
}

MassLedger integrate_flows(const Problem& problem, const ValueTable& policy, const Field& z,
                           std::span<const int> delays) {
    check_delays(problem, delays);
    MassLedger ledger = start_ledger(problem);
    const auto& paths = problem.paths;
    const std::size_t nodes = problem.grid.size();
    const std::size_t pairs = paths.pair_count();
    const double q = ledger.quantum;
    const double dt = problem.grid.dt();

    // Integer quanta keep the origin split exact: sum of shares == total.
    Field in(pairs, nodes);
    Field out(pairs, nodes);
    std::vector<std::size_t> order(paths.path_count());
    std::vector<double> frac(paths.path_count());
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        const auto g = local_decision(problem, column(z, i));
        const double units = std::nearbyint(dt * problem.lambda[i] / q);
        double assigned = 0.0;
        for (std::size_t p = 0; p < paths.path_count(); ++p) {
            const auto k = static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), 0));
            const double share = units * g[k];
            const double base = std::floor(share);
            in(k, i) = base;
            frac[p] = share - base;
            assigned += base;
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
        const auto extra = static_cast<std::int64_t>(units - assigned);
        for (std::int64_t r = 0; r < extra && !order.empty(); ++r) {
            const auto p = order[static_cast<std::size_t>(r) % order.size()];
            in(static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), 0)), i) += 1.0;
        }
        for (std::size_t p = 0; p < paths.path_count(); ++p) {
            const auto k = static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), 0));
            in(k, i) *= q;
        }
    }
    for (std::size_t p = 0; p < paths.path_count(); ++p) {
        const auto& edges = paths.path(static_cast<int>(p));
        for (std::size_t pos = 0; pos < edges.size(); ++pos) {
            const auto k = static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), static_cast<int>(pos)));
            const auto delay = static_cast<std::size_t>(delays[static_cast<std::size_t>(edges[pos])]);
            if (pos > 0) {
                for (std::size_t i = 0; i + 1 < nodes; ++i) in(k, i) = out(k - 1, i);
            }
            for (std::size_t i = delay; i + 1 < nodes; ++i) {
                if (policy.arrival(k, i - delay) != kNever) out(k, i) = in(k, i - delay);
            }
        }
    }
    std::vector<double> in_i(pairs);
    std::vector<double> out_i(pairs);
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        for (std::size_t k = 0; k < pairs; ++k) {
            in_i[k] = in(k, i);
            out_i[k] = out(k, i);
            const auto& pr = paths.pair(static_cast<int>(k));
            if (pr.position == 0) ledger.inflow[i] += in_i[k];
            if (static_cast<std::size_t>(pr.position) + 1 == paths.path(pr.path).size()) ledger.outflow[i] += out_i[k];
        }
        advance(problem, ledger, i, in_i, out_i);
    }
    return ledger;
}

}  // namespace mfgnet
