#pragma once

#include <optional>
#include <string>

#include "mfgnet/scenario.hpp"
#include "mfgnet/table.hpp"
#include "mfgnet/value.hpp"

namespace mfgnet::verify {

/// Value table obtained by listing every sequence of grid arrival times along
/// the rest of each path, with no reuse of partial results. Exponential in the
/// number of edges; meant for coarse grids.
ValueTable enumerate_values(const Problem& problem, const Field& mass, const IndexTable* first_admissible = nullptr);

struct Mismatch {
    std::string quantity;   // "value", "policy" or "balance"
    int pair = -1;
    int node = -1;
    double expected = 0.0;
    double actual = 0.0;
};

struct OracleResult {
    double max_value_deviation = 0.0;
    std::size_t policy_mismatches = 0;
    std::size_t checked = 0;
    bool balance_ok = true;
    double max_inflow_error = 0.0;    // |ledger inflow - dt lambda|
    double max_outflow_error = 0.0;   // |ledger outflow - dt * destination flow|
    std::optional<Mismatch> first;
    bool ok() const { return !first.has_value(); }
};

/// Compares the main pipeline at `mass` against enumeration, and re-sums the
/// mass ledger of psi(mass) node by node. Throws Error{Validation} when the
/// grid has more than `max_steps` steps.
OracleResult run_oracle(const Problem& problem, const Field& mass, bool constrained, int max_steps);

}  // namespace mfgnet::verify
