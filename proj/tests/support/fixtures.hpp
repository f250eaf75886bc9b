#pragma once

#include <random>

#include "json.hpp"

#include "mfgnet/scenario.hpp"
#include "mfgnet/table.hpp"

namespace fixtures {

/// The four-vertex, five-edge test network with unit lengths and the default model.
nlohmann::json diamond_json(int steps = 500);
/// Two disjoint two-edge routes o -> a -> d and o -> b -> d with identical data.
nlohmann::json symmetric_json(int steps = 200);
/// Single edge o -> d.
nlohmann::json single_edge_json(double horizon, int steps, double length, double alpha, double a = 0.0);
/// Chain o -> v -> d.
nlohmann::json chain_json(double horizon, int steps, double alpha, double a = 0.0);

mfgnet::Problem make(const nlohmann::json& doc);
mfgnet::Problem diamond(int steps = 500);

int pair_of(const mfgnet::Problem& p, const std::string& label);

/// Nonnegative, 0.9 * 3 lambda_bar Lipschitz trajectories with every pair below
/// rho_max / pair_count, so edge totals stay below rho_max.
mfgnet::Field random_admissible(const mfgnet::Problem& p, std::mt19937_64& rng);

}  // namespace fixtures
