#pragma once

#include <span>
#include <vector>

#include "mfgnet/scenario.hpp"
#include "mfgnet/table.hpp"
#include "mfgnet/value.hpp"

namespace mfgnet {

/// Earliest arrival times under mass-dependent speed limits, one row per edge.
struct ArrivalConstraint {
    Field earliest;                 // edges x nodes: tau(t_i, e); values above T are infeasible
    IndexTable first_admissible;    // edges x nodes: smallest admissible arrival index (N + 1 if none)
    std::vector<double> mean_traverse;   // tau_bar(e)
    std::vector<int> delays;             // k~_e in grid steps
};

/// Smallest tau with integral_{t_i}^{tau} U(max(m, floor)) = length, using the
/// trapezoid prefix of the speed and linear interpolation inside the last step.
/// Past T the speed is held at U(m(T)).
double min_arrival(const TimeGrid& grid, int i, double length, std::span<const double> mass, const SpeedLimit& limit,
                   double mass_floor);

/// Same query on a precomputed prefix integral of the speed.
double min_arrival_from_prefix(const TimeGrid& grid, int i, double length, std::span<const double> prefix,
                               double terminal_speed);

/// (1/T) * trapezoid of tau(s) - s over the grid.
double mean_traverse_time(const TimeGrid& grid, std::span<const double> earliest);

/// max(k, tau_bar) in grid steps, capped at `cap_fraction * T` (never below k).
int modified_delay(const TimeGrid& grid, int k, double mean_traverse, double cap_fraction);

ArrivalConstraint arrival_constraint(const Problem& problem, const Congestion& congestion);

/// value_backward restricted to arrivals at or after the earliest feasible grid node.
ValueTable value_backward_constrained(const Problem& problem, const Congestion& congestion,
                                      const ArrivalConstraint& constraint);

}  // namespace mfgnet
