#include "mfgnet/constrained.hpp"

#include <algorithm>
#include <cmath>

namespace mfgnet {

double min_arrival_from_prefix(const TimeGrid& grid, int i, double length, std::span<const double> prefix,
                               double terminal_speed) {
    const auto n = static_cast<std::size_t>(grid.steps());
    const auto iu = static_cast<std::size_t>(i);
    const double target = prefix[iu] + length;
    if (prefix[n] < target) return grid.horizon() + (target - prefix[n]) / terminal_speed;
    // first j > i with prefix[j] >= target; prefix is strictly increasing
    const auto it = std::lower_bound(prefix.begin() + static_cast<std::ptrdiff_t>(iu) + 1, prefix.begin() + static_cast<std::ptrdiff_t>(n) + 1, target);
    const auto j = static_cast<std::size_t>(it - prefix.begin());
    const double w = (target - prefix[j - 1]) / (prefix[j] - prefix[j - 1]);
    return grid.t(static_cast<int>(j - 1)) + w * grid.dt();
}

namespace {
std::vector<double> speeds(std::span<const double> mass, const SpeedLimit& limit, double mass_floor) {
    std::vector<double> u(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) u[i] = limit(std::max(mass[i], mass_floor));
    return u;
}
}  // namespace

double min_arrival(const TimeGrid& grid, int i, double length, std::span<const double> mass, const SpeedLimit& limit,
                   double mass_floor) {
    const auto u = speeds(mass, limit, mass_floor);
    const auto prefix = prefix_integral(u, grid.dt());
    return min_arrival_from_prefix(grid, i, length, prefix, u.back());
}

double mean_traverse_time(const TimeGrid& grid, std::span<const double> earliest) {
    std::vector<double> d(earliest.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = earliest[i] - grid.t(static_cast<int>(i));
    return trapezoid(d, grid.dt()) / grid.horizon();
}

int modified_delay(const TimeGrid& grid, int k, double mean_traverse, double cap_fraction) {
    const int raw = std::max(k, grid.floor_steps(mean_traverse));
    const int cap = std::max(k, grid.floor_steps(cap_fraction * grid.horizon()));
    return std::min(raw, cap);
}

ArrivalConstraint arrival_constraint(const Problem& problem, const Congestion& congestion) {
    const auto& grid = problem.grid;
    const auto& settings = problem.scenario.constrained;
    const std::size_t edges = problem.network.edge_count();
    const int n = grid.steps();
    const int k = compute_k_steps(problem);
    ArrivalConstraint c{Field(edges, grid.size()), IndexTable(edges, grid.size(), n + 1), {}, {}};
    for (std::size_t e = 0; e < edges; ++e) {
        const auto u = speeds(congestion.totals.row(e), settings.limits[e], settings.mass_floor);
        const auto prefix = prefix_integral(u, grid.dt());
        const double len = problem.network.edge(static_cast<int>(e)).length;
        for (int i = 0; i <= n; ++i) {
            const double tau = min_arrival_from_prefix(grid, i, len, prefix, u.back());
            c.earliest(e, static_cast<std::size_t>(i)) = tau;
            if (tau <= grid.horizon()) {
                c.first_admissible(e, static_cast<std::size_t>(i)) = std::max(i + 1, grid.ceil_index(tau));
            }
        }
        const double mean = mean_traverse_time(grid, c.earliest.row(e));
        c.mean_traverse.push_back(mean);
        c.delays.push_back(modified_delay(grid, k, mean, settings.delay_cap_fraction));
    }
    return c;
}

ValueTable value_backward_constrained(const Problem& problem, const Congestion& congestion,
                                      const ArrivalConstraint& constraint) {
    return value_backward(problem, congestion, &constraint.first_admissible);
}

}  // namespace mfgnet
