#include "mfgnet/value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfgnet/errors.hpp"

namespace mfgnet {

namespace {
#ifdef MFGNET_FAULT_INJECTION
// Test builds only: drop the last candidate arrival so the oracle has something to catch.
constexpr int kSearchTrim = 1;
#else
constexpr int kSearchTrim = 0;
#endif
}  // namespace

void check_mass_shape(const Problem& problem, const Field& mass) {
    const std::size_t rows = problem.paths.pair_count();
    const std::size_t cols = problem.grid.size();
    if (mass.rows() != rows || mass.cols() != cols) {
        throw Error(ErrorCode::ShapeMismatch, "mass field is " + std::to_string(mass.rows()) + "x" +
                                                  std::to_string(mass.cols()) + ", expected " +
                                                  std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Congestion congestion_total(const Problem& problem, const Field& mass) {
    check_mass_shape(problem, mass);
    const std::size_t edges = problem.network.edge_count();
    const std::size_t nodes = problem.grid.size();
    Congestion c{Field(edges, nodes), Field(edges, nodes), Field(edges, nodes)};
    for (std::size_t e = 0; e < edges; ++e) {
        const auto& phi = problem.scenario.congestion[e];
        for (std::size_t i = 0; i < nodes; ++i) {
            double m = 0.0;
            for (int k : problem.paths.pairs_on_edge(static_cast<int>(e))) m += mass(static_cast<std::size_t>(k), i);
            c.totals(e, i) = m;
            c.cost(e, i) = phi(m);
        }
        const auto integral = prefix_integral(c.cost.row(e), problem.grid.dt());
        std::copy(integral.begin(), integral.end(), c.integral.row(e).begin());
    }
    return c;
}

ValueTable value_backward(const Problem& problem, const Congestion& congestion, const IndexTable* first_admissible) {
    const auto& net = problem.network;
    const auto& paths = problem.paths;
    const int n = problem.grid.steps();
    const auto t = problem.grid.nodes();
    const double alpha = problem.scenario.alpha;
    const double eps = problem.scenario.solver.eps_tie;
    const auto nodes = problem.grid.size();

    ValueTable out{Field(paths.pair_count(), nodes), IndexTable(paths.pair_count(), nodes, kNever)};
    // g[j] = Cont(t_j) - integral of phi over [t_j, T]; subtracting the
    // stay-side integral makes the move/stay comparison independent of t_i.
    std::vector<double> g(nodes);
    std::vector<double> x(nodes);

    for (std::size_t p = 0; p < paths.path_count(); ++p) {
        const auto& path = paths.path(static_cast<int>(p));
        for (int pos = static_cast<int>(path.size()) - 1; pos >= 0; --pos) {
            const int e = path[static_cast<std::size_t>(pos)];
            const auto& edge = net.edge(e);
            const auto k = static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), pos));
            const auto phi = congestion.integral.row(static_cast<std::size_t>(e));
            const double stay_base = alpha * net.shortest_remaining_length(edge.tail);
            const double len = edge.length;
            const bool last = static_cast<std::size_t>(pos) + 1 == path.size();

            if (last) {
                g[static_cast<std::size_t>(n)] = 0.0;
            } else {
                const auto s = static_cast<std::size_t>(paths.pair_index(static_cast<int>(p), pos + 1));
                for (int j = 0; j < n; ++j) {
                    const auto ju = static_cast<std::size_t>(j);
                    g[ju] = out.values(s, ju) - (phi[nodes - 1] - phi[ju]);
                }
                g[nodes - 1] = std::min(stay_base, out.values(s, nodes - 1)) - (phi[nodes - 1] - phi[nodes - 1]);
            }

            for (int i = 0; i <= n; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                const double rest = phi[nodes - 1] - phi[iu];
                const double stay = stay_base + rest;
                int lo = last ? n : i + 1;
                if (first_admissible) lo = std::max(lo, (*first_admissible)(static_cast<std::size_t>(e), iu));
                double best = std::numeric_limits<double>::infinity();
                const int hi = n - kSearchTrim;
                for (int j = lo; j <= hi; ++j) {
                    const auto ju = static_cast<std::size_t>(j);
                    x[ju] = (len * len) / (2.0 * (t[ju] - t[iu])) + g[ju];
                    best = std::min(best, x[ju]);
                }
                if (lo <= hi && best <= stay_base + eps) {
                    int star = lo;
                    for (int j = hi; j >= lo; --j) {
                        if (x[static_cast<std::size_t>(j)] <= best + eps) {
                            star = j;
                            break;
                        }
                    }
                    out.arrival(k, iu) = star;
                    out.values(k, iu) = std::min(stay, best + rest);
                } else {
                    out.values(k, iu) = stay;
                }
            }
        }
    }
    return out;
}

ValueTable value_backward(const Problem& problem, const Field& mass) {
    return value_backward(problem, congestion_total(problem, mass));
}

double value_at(const ValueTable& table, const TimeGrid& grid, int pair, double t) {
    const double slack = 1e-12 * grid.horizon();
    if (!(t >= -slack && t <= grid.horizon() + slack)) {
        throw Error(ErrorCode::OutOfRange, "time " + std::to_string(t) + " outside [0, T]");
    }
    const auto row = table.values.row(static_cast<std::size_t>(pair));
    double s = std::clamp(t / grid.dt(), 0.0, static_cast<double>(grid.steps()));
    if (std::abs(s - std::nearbyint(s)) < 1e-9) s = std::nearbyint(s);
    const auto lo = std::min(static_cast<std::size_t>(s), row.size() - 1);
    if (lo + 1 >= row.size()) return row[lo];
    const double w = s - static_cast<double>(lo);
    if (w == 0.0) return row[lo];
    return row[lo] + w * (row[lo + 1] - row[lo]);
}

double control(const Problem& problem, const ValueTable& table, int pair, int i) {
    const int j = table.arrival(static_cast<std::size_t>(pair), static_cast<std::size_t>(i));
    if (j == kNever) return 0.0;
    const auto& edge = problem.network.edge(problem.paths.pair(pair).edge);
    return edge.length / (problem.grid.t(j) - problem.grid.t(i));
}

double arrival_time(const TimeGrid& grid, int index) {
    return index == kNever ? std::numeric_limits<double>::infinity() : grid.t(index);
}

}  // namespace mfgnet
