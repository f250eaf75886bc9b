#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mfgnet/grid.hpp"
#include "mfgnet/network.hpp"

namespace mfgnet {

/// Congestion running cost phi_e, a function of the total mass on the edge.
struct CongestionCost {
    enum class Family { Linear, Saturating };

    Family family = Family::Linear;
    double coefficient = 0.0;
    /// Saturation level for the affine-saturating family (set to rho_max on load).
    double saturation = 0.0;

    double operator()(double mass) const;
    /// Lipschitz constant on [0, rho_max].
    double lipschitz() const { return coefficient; }
    /// sup of phi over [0, rho_max].
    double sup_norm(double rho_max) const;
};

/// Closed-form or tabulated throughput lambda(t).
struct ThroughputSpec {
    enum class Family { Constant, Sinusoidal, Table };

    Family family = Family::Constant;
    double value = 1.0;       // constant
    double mean = 1.0;        // sinusoidal
    double amplitude = 0.0;
    double period = 1.0;
    double phase = 0.0;
    std::vector<double> times;   // table (linear interpolation, clamped at the ends)
    std::vector<double> values;

    double at(double t) const;
};

/// Mass-dependent speed limit U_e on ]0, inf[.
struct SpeedLimit {
    enum class Family { Reciprocal, Table };

    Family family = Family::Reciprocal;
    double coefficient = 1.0;       // reciprocal: U(m) = c / m
    std::vector<double> masses;     // table: strictly increasing masses
    std::vector<double> speeds;     //        strictly positive, strictly decreasing speeds

    double operator()(double mass) const;
};

struct SolverSettings {
    double gamma = 0.5;
    double tol = 0.0;       // resolved to 1e-3 * rho_max when absent
    int max_iter = 500;
    double eps_tie = 0.0;   // resolved to 1e-9 * cost scale when absent
    std::size_t path_limit = kDefaultPathLimit;
};

struct ConstrainedSettings {
    bool enabled = false;
    std::vector<SpeedLimit> limits;   // one per edge (network edge order)
    double mass_floor = 0.0;          // resolved to 1e-6 * rho_max when absent
    double delay_cap_fraction = 0.5;  // k~ is capped at this fraction of T
};

struct Scenario {
    double horizon = 0.0;
    int steps = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    double rho_max = 0.0;
    ThroughputSpec throughput;
    std::vector<CongestionCost> congestion;   // one per edge (network edge order)
    bool z0_uniform = true;
    std::vector<double> z0_explicit;          // one per path when !z0_uniform
    std::map<std::string, double> rho0;       // pair label "e:p" -> initial mass
    SolverSettings solver;
    ConstrainedSettings constrained;
};

/// Network, enumerated paths, parameters and grid, with lambda sampled on the grid.
struct Problem {
    Network network;
    PathSet paths;
    Scenario scenario;
    TimeGrid grid;
    std::vector<double> lambda;   // lambda(t_i)

    double lambda_max() const;
    double lambda_min() const;
    /// Initial preference z0 per path.
    std::vector<double> initial_preference() const;
    /// "e1:p2" style label for a pair.
    std::string pair_label(int pair) const;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool ok() const;
    /// First failing check, formatted as "name: detail".
    std::string first_failure() const;
};

/// Parse a scenario document; structural JSON problems raise Error{Parse}.
/// Assumption checks are collected in `report` and do not throw.
std::optional<Problem> parse_scenario(const nlohmann::json& doc, ValidationReport& report);

/// Parse + validate; throws Error{Parse} or Error{Validation} naming the failed check.
Problem load_scenario(const nlohmann::json& doc);
Problem load_scenario(const std::filesystem::path& file);

/// Read a scenario file and run every check without throwing on validation failures.
ValidationReport check_scenario_file(const std::filesystem::path& file);

/// Serialize back to the scenario file format (resolved defaults included).
nlohmann::json to_json(const Problem& problem);

/// Same problem on a different grid (lambda resampled).
Problem with_steps(const Problem& problem, int steps);

/// Traverse delay k as a number of grid steps.
///
/// k = min_e l_e / (2 alpha): for T - t below that, reaching the head costs at
/// least l_e^2 / (2 (T - t)) > alpha l_e, so staying is certainly optimal.
/// Rounded down to a grid multiple and clamped to [dt, T].
int compute_k_steps(const Network& network, double alpha, const TimeGrid& grid);
int compute_k_steps(const Problem& problem);

}  // namespace mfgnet
