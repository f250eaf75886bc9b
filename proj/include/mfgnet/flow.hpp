#pragma once

#include <span>
#include <vector>

#include "mfgnet/scenario.hpp"
#include "mfgnet/table.hpp"
#include "mfgnet/value.hpp"

namespace mfgnet {

/// The traverse delay k (in grid steps) applied to every edge.
std::vector<int> uniform_delays(const Problem& problem);

/// G[t] for one node: z_p / sum z on the first pair of each path, 0 elsewhere.
/// Throws Error{DegenerateSimplex} when sum z <= 0.
std::vector<double> local_decision(const Problem& problem, std::span<const double> z);

/// Delayed outgoing flows f^e_p(t_i); pairs x nodes. `delays` holds one step
/// count per edge and f is zero before it.
Field compute_flows(const Problem& problem, const ValueTable& policy, const Field& z, std::span<const int> delays);

/// H^e_p(t_i) = lambda G + f^{prec} - f^e_p; pairs x nodes.
Field mass_rhs(const Problem& problem, const Field& flows, const Field& z);

/// Euler integration of the mass field on a power-of-two quantum.
///
/// Every increment is rounded to a multiple of `quantum`, which is small enough
/// that all partial sums of masses are exact. The per-node balance
///   sum rho(t_{i+1}) + clipped[i + 1] - sum rho(t_i) = inflow[i] - outflow[i]
/// then holds bitwise. integrate_flows books origin inflow and destination
/// outflow; integrate_mass only sees net rates and books the gross positive and
/// negative increments instead.
struct MassLedger {
    Field mass;
    std::vector<double> inflow;    // origin inflow increment over [t_i, t_{i+1}]
    std::vector<double> outflow;   // destination outflow increment over [t_i, t_{i+1}]
    std::vector<double> clipped;   // mass removed by clipping at node i (index 0 unused)
    double quantum = 0.0;
    double max_clip = 0.0;
    std::size_t clip_count = 0;
};

double mass_quantum(const Problem& problem);

/// rho(t_{i+1}) = rho(t_i) + dt H(t_i), starting from the scenario's initial mass.
/// Throws Error{MassBoundExceeded} if an edge total exceeds rho_max.
MassLedger integrate_mass(const Problem& problem, const Field& rhs);

/// Same scheme, driven directly by the policy: origin inflow dt lambda(t_i) is
/// split across first pairs by largest remainder, and each pair releases its
/// own inflow increment after its delay when the policy moves.
MassLedger integrate_flows(const Problem& problem, const ValueTable& policy, const Field& z,
                           std::span<const int> delays);

/// Initial mass field rho(t_0) as a column per pair.
std::vector<double> initial_mass(const Problem& problem);

}  // namespace mfgnet
