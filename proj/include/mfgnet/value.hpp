#pragma once

#include "mfgnet/scenario.hpp"
#include "mfgnet/table.hpp"

namespace mfgnet {

/// Arrival index used for "never leaves the tail vertex" (tau* = infinity).
inline constexpr int kNever = -1;

/// Per-edge mass totals and congestion-cost quadrature for one mass field.
struct Congestion {
    Field totals;     // edges x nodes: m_e(t_i) = sum over paths of rho^e_p(t_i)
    Field cost;       // edges x nodes: phi_e(m_e(t_i))
    Field integral;   // edges x nodes: trapezoid prefix integral of cost
};

/// Value samples V^e_p(t_i) and optimal arrival indices, one row per (edge, path) pair.
struct ValueTable {
    Field values;
    IndexTable arrival;   // grid index of tau*, or kNever
};

/// Throws Error{ShapeMismatch} unless mass is pair_count x (N + 1).
void check_mass_shape(const Problem& problem, const Field& mass);

Congestion congestion_total(const Problem& problem, const Field& mass);

/// Backward recursion along every path.
///
/// `first_admissible`, when given, is an edges x nodes table holding the
/// smallest grid index an agent entering the edge at t_i may arrive at; an
/// entry above N leaves only the stay branch.
ValueTable value_backward(const Problem& problem, const Congestion& congestion,
                          const IndexTable* first_admissible = nullptr);
ValueTable value_backward(const Problem& problem, const Field& mass);

/// Linear interpolation of one row of values; throws Error{OutOfRange} outside [0, T].
double value_at(const ValueTable& table, const TimeGrid& grid, int pair, double t);

/// Constant speed l_e / (tau* - t_i), 0 when the agent stays.
double control(const Problem& problem, const ValueTable& table, int pair, int i);

/// tau* as a time, infinity for kNever.
double arrival_time(const TimeGrid& grid, int index);

}  // namespace mfgnet
