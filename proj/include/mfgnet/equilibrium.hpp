#pragma once

#include <optional>
#include <vector>

#include "mfgnet/constrained.hpp"
#include "mfgnet/flow.hpp"
#include "mfgnet/preference.hpp"
#include "mfgnet/scenario.hpp"
#include "mfgnet/value.hpp"

namespace mfgnet {

/// Every intermediate product of one evaluation of psi. `ledger.mass` is psi(rho).
struct PsiStages {
    Congestion congestion;
    std::optional<ArrivalConstraint> constraint;
    ValueTable policy;
    Field costs;        // J^p(t_i)
    Field logit;        // F_beta^p(t_i)
    Field preference;   // z_p(t_i)
    Field flows;        // f^e_p(t_i)
    std::vector<int> delays;
    MassLedger ledger;
    std::size_t negative_preferences = 0;
};

/// rho -> (V, tau*) -> (J, F_beta, z) -> f -> psi(rho).
PsiStages apply_psi(const Problem& problem, const Field& mass, bool constrained = false);

/// sup |a - b|; throws Error{ShapeMismatch}.
double residual(const Field& a, const Field& b);

struct Membership {
    double max_edge_mass = 0.0;
    double rho_max = 0.0;
    double max_quotient = 0.0;   // max |rho(t_{i+1}) - rho(t_i)| / dt
    double lipschitz = 0.0;      // 3 lambda_bar
    double min_mass = 0.0;
    bool mass_ok = false;
    bool lipschitz_ok = false;
    bool nonnegative_ok = false;
    bool ok() const { return mass_ok && lipschitz_ok && nonnegative_ok; }
};

/// Bounds that define the admissible set: edge totals within rho_max, discrete
/// difference quotients within 3 lambda_bar (+ slack), no negative entries.
Membership verify_membership(const Problem& problem, const Field& mass, double slack = 1e-9);

/// First node i where the ledger balance fails bitwise, if any.
std::optional<int> balance_violation(const MassLedger& ledger);

struct EquilibriumReport {
    Field mass;                 // rho*: last iterate
    PsiStages stages;           // psi(rho*)
    std::vector<double> residuals;
    std::vector<int> increases; // iterations n with r_n > r_{n-1}
    int iterations = 0;
    bool converged = false;
    bool constrained = false;
    double tolerance = 0.0;
    Membership membership;
    std::optional<int> balance_failure;
    std::size_t total_clips = 0;
    double max_clip = 0.0;
};

/// Damped iteration rho_{n+1} = (1 - gamma) rho_n + gamma psi(rho_n) from rho_0 = 0,
/// stopping once ||psi(rho_n) - rho_n|| <= tol. Non-convergence is reported, not thrown.
EquilibriumReport solve(const Problem& problem, bool constrained = false);

}  // namespace mfgnet
