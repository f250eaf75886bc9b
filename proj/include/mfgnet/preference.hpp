#pragma once

#include <span>
#include <vector>

#include "mfgnet/scenario.hpp"
#include "mfgnet/table.hpp"
#include "mfgnet/value.hpp"

namespace mfgnet {

/// Grid index at which an agent starting path p at t_i enters each edge of p
/// (kNever once it stops for good).
std::vector<int> path_entry_times(const Problem& problem, const ValueTable& policy, int path, int i);

/// J^p(t_i) accumulated forward along the policy; paths x nodes.
Field path_costs(const Problem& problem, const Congestion& congestion, const ValueTable& policy);

/// Logit split of lambda across paths. The minimum cost is subtracted before
/// exponentiating, so adding a constant to every J leaves the result unchanged.
std::vector<double> logit_response(std::span<const double> costs, double lambda, double beta);

/// F_beta(t_i) for every node; paths x nodes.
Field logit_table(const Problem& problem, const Field& costs);

/// z(t_i) = F(t_i) + (z0 - F(0)) exp(-eta t_i), the exact solution of the
/// preference dynamics. Throws Error{SimplexViolation} unless sum z0 = lambda(0).
Field preference_evolution(const Problem& problem, const Field& logit, std::span<const double> z0);

/// Explicit Euler for the same dynamics, with dF/dt replaced by forward differences.
Field preference_euler(const Problem& problem, const Field& logit, std::span<const double> z0);

/// Number of negative preference samples (left unclamped).
std::size_t count_negative(const Field& z);

}  // namespace mfgnet
