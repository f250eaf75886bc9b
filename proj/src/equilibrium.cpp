#include "mfgnet/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "mfgnet/errors.hpp"

namespace mfgnet {

PsiStages apply_psi(const Problem& problem, const Field& mass, bool constrained) {
    PsiStages s;
    s.congestion = congestion_total(problem, mass);
    if (constrained) {
        s.constraint = arrival_constraint(problem, s.congestion);
        s.policy = value_backward_constrained(problem, s.congestion, *s.constraint);
        s.delays = s.constraint->delays;
    } else {
        s.policy = value_backward(problem, s.congestion);
        s.delays = uniform_delays(problem);
    }
    s.costs = path_costs(problem, s.congestion, s.policy);
    s.logit = logit_table(problem, s.costs);
    const auto z0 = problem.initial_preference();
    s.preference = preference_evolution(problem, s.logit, z0);
    s.negative_preferences = count_negative(s.preference);
    s.flows = compute_flows(problem, s.policy, s.preference, s.delays);
    s.ledger = integrate_flows(problem, s.policy, s.preference, s.delays);
    return s;
}

double residual(const Field& a, const Field& b) {
    if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "residual of fields with different shapes");
    double r = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t k = 0; k < va.size(); ++k) r = std::max(r, std::abs(va[k] - vb[k]));
    return r;
}

Membership verify_membership(const Problem& problem, const Field& mass, double slack) {
    check_mass_shape(problem, mass);
    Membership m;
    m.rho_max = problem.scenario.rho_max;
    m.lipschitz = 3.0 * problem.lambda_max();
    const double dt = problem.grid.dt();
    for (std::size_t e = 0; e < problem.network.edge_count(); ++e) {
        for (std::size_t i = 0; i < mass.cols(); ++i) {
            double total = 0.0;
            for (int k : problem.paths.pairs_on_edge(static_cast<int>(e))) total += mass(static_cast<std::size_t>(k), i);
            m.max_edge_mass = std::max(m.max_edge_mass, total);
        }
    }
    for (std::size_t k = 0; k < mass.rows(); ++k) {
        for (std::size_t i = 0; i < mass.cols(); ++i) {
            m.min_mass = std::min(m.min_mass, mass(k, i));
            if (i + 1 < mass.cols()) m.max_quotient = std::max(m.max_quotient, std::abs(mass(k, i + 1) - mass(k, i)) / dt);
        }
    }
    m.mass_ok = m.max_edge_mass <= m.rho_max;
    m.lipschitz_ok = m.max_quotient <= m.lipschitz + slack;
    m.nonnegative_ok = m.min_mass >= 0.0;
    return m;
}

std::optional<int> balance_violation(const MassLedger& ledger) {
    const auto& rho = ledger.mass;
    for (std::size_t i = 0; i + 1 < rho.cols(); ++i) {
        double before = 0.0;
        double after = 0.0;
        for (std::size_t k = 0; k < rho.rows(); ++k) {
            before += rho(k, i);
            after += rho(k, i + 1);
        }
        if ((after + ledger.clipped[i + 1]) - before != ledger.inflow[i] - ledger.outflow[i]) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

EquilibriumReport solve(const Problem& problem, bool constrained) {
    const auto& settings = problem.scenario.solver;
    EquilibriumReport report;
    report.constrained = constrained;
    report.tolerance = settings.tol;
    Field rho(problem.paths.pair_count(), problem.grid.size());
    const double gamma = settings.gamma;
    for (int n = 0; n < settings.max_iter; ++n) {
        PsiStages stages = apply_psi(problem, rho, constrained);
        const double r = residual(stages.ledger.mass, rho);
        if (!report.residuals.empty() && r > report.residuals.back()) report.increases.push_back(n);
        report.residuals.push_back(r);
        report.total_clips += stages.ledger.clip_count;
        report.max_clip = std::max(report.max_clip, stages.ledger.max_clip);
        if (!report.balance_failure) report.balance_failure = balance_violation(stages.ledger);
        const bool done = r <= settings.tol;
        if (done || n + 1 == settings.max_iter) {
            report.converged = done;
            report.mass = std::move(rho);
            report.stages = std::move(stages);
            break;
        }
        auto next = rho.values();
        const auto psi = stages.ledger.mass.values();
        for (std::size_t k = 0; k < next.size(); ++k) next[k] = (1.0 - gamma) * next[k] + gamma * psi[k];
    }
    report.iterations = static_cast<int>(report.residuals.size());
    report.membership = verify_membership(problem, report.mass);
    return report;
}

}  // namespace mfgnet
