#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

#include "mfgnet/equilibrium.hpp"
#include "mfgnet/errors.hpp"
#include "mfgnet/flow.hpp"

using namespace mfgnet;

namespace {

Field zeros(const Problem& p) { return Field(p.paths.pair_count(), p.grid.size()); }

ValueTable always_move(const Problem& p) {
    ValueTable v{zeros(p), IndexTable(p.paths.pair_count(), p.grid.size(), kNever)};
    for (std::size_t k = 0; k < v.arrival.rows(); ++k) {
        for (std::size_t i = 0; i + 1 < v.arrival.cols(); ++i) v.arrival(k, i) = static_cast<int>(p.grid.steps());
    }
    return v;
}

Field uniform_z(const Problem& p) {
    Field z(p.paths.path_count(), p.grid.size());
    for (std::size_t i = 0; i < z.cols(); ++i) {
        for (std::size_t q = 0; q < z.rows(); ++q) z(q, i) = p.lambda[i] / static_cast<double>(z.rows());
    }
    return z;
}

}  // namespace

TEST_CASE("local decision splits over first edges") {
    const Problem p = fixtures::diamond(10);
    const std::vector<double> z{0.5, 0.25, 0.25};
    const auto g = local_decision(p, z);
    CHECK(g[static_cast<std::size_t>(fixtures::pair_of(p, "e1:p1"))] == 0.5);
    CHECK(g[static_cast<std::size_t>(fixtures::pair_of(p, "e2:p2"))] == 0.25);
    CHECK(g[static_cast<std::size_t>(fixtures::pair_of(p, "e1:p3"))] == 0.25);
    CHECK(g[static_cast<std::size_t>(fixtures::pair_of(p, "e4:p1"))] == 0.0);
    CHECK(g[static_cast<std::size_t>(fixtures::pair_of(p, "e3:p3"))] == 0.0);

    const std::vector<double> dead{0.0, 0.0, 0.0};
    try {
        local_decision(p, dead);
        FAIL("expected DegenerateSimplex");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateSimplex);
    }
}

TEST_CASE("flows under a moving policy and uniform preferences") {
    const Problem p = fixtures::diamond(500);
    const auto delays = uniform_delays(p);
    const int k = delays[0];
    CHECK(k == 25);
    const Field f = compute_flows(p, always_move(p), uniform_z(p), delays);
    const auto e1p1 = static_cast<std::size_t>(fixtures::pair_of(p, "e1:p1"));
    const auto e4p1 = static_cast<std::size_t>(fixtures::pair_of(p, "e4:p1"));
    const auto e5p3 = static_cast<std::size_t>(fixtures::pair_of(p, "e5:p3"));
    for (std::size_t i = 0; i < f.cols(); ++i) {
        const auto iu = static_cast<int>(i);
        CHECK(f(e1p1, i) == (iu < k ? 0.0 : 1.0 / 3.0));
        CHECK(f(e4p1, i) == (iu < 2 * k ? 0.0 : 1.0 / 3.0));
        CHECK(f(e5p3, i) == (iu < 3 * k ? 0.0 : 1.0 / 3.0));
    }
}

TEST_CASE("a policy that never moves produces no flow") {
    const Problem p = fixtures::diamond(100);
    const ValueTable stay{zeros(p), IndexTable(p.paths.pair_count(), p.grid.size(), kNever)};
    const Field f = compute_flows(p, stay, uniform_z(p), uniform_delays(p));
    for (double x : f.values()) CHECK(x == 0.0);
    const auto ledger = integrate_flows(p, stay, uniform_z(p), uniform_delays(p));
    // everything piles up on the first edges and nothing leaves
    const auto n = p.grid.size() - 1;
    double total = 0.0;
    for (std::size_t k = 0; k < ledger.mass.rows(); ++k) total += ledger.mass(k, n);
    CHECK(total == doctest::Approx(p.grid.horizon()).epsilon(1e-12));
    CHECK(ledger.mass(static_cast<std::size_t>(fixtures::pair_of(p, "e4:p1")), n) == 0.0);
}

TEST_CASE("mass right-hand side") {
    const Problem p = fixtures::diamond(500);
    const auto delays = uniform_delays(p);
    const Field z = uniform_z(p);
    const Field f = compute_flows(p, always_move(p), z, delays);
    const Field h = mass_rhs(p, f, z);
    const auto e1p3 = static_cast<std::size_t>(fixtures::pair_of(p, "e1:p3"));
    const auto e3p3 = static_cast<std::size_t>(fixtures::pair_of(p, "e3:p3"));
    CHECK(h(e1p3, 0) == 1.0 / 3.0);
    CHECK(h(e1p3, 30) == 0.0);
    CHECK(h(e3p3, 30) == 1.0 / 3.0);
    CHECK(h(e3p3, 60) == 0.0);
}

TEST_CASE("integrated masses land on the quantum and balance exactly") {
    const Problem p = fixtures::diamond(500);
    const auto delays = uniform_delays(p);
    const Field z = uniform_z(p);
    const auto ledger = integrate_flows(p, always_move(p), z, delays);
    const double q = ledger.quantum;
    CHECK(q == std::ldexp(1.0, 10 - 52));   // 4 * rho_max * pairs = 560
    for (double x : ledger.mass.values()) CHECK(std::fmod(x, q) == 0.0);
    CHECK_FALSE(balance_violation(ledger).has_value());
    CHECK(ledger.clip_count == 0);

    // steady state: each pair holds k * dt * lambda / 3 once the pipeline is full
    const auto k = static_cast<std::size_t>(delays[0]);
    const double expected = static_cast<double>(k) * p.grid.dt() / 3.0;
    for (std::size_t pair = 0; pair < ledger.mass.rows(); ++pair) {
        CHECK(ledger.mass(pair, 400) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("integrate_mass agrees with the flow ledger") {
    const Problem p = fixtures::diamond(200);
    const auto delays = uniform_delays(p);
    const Field z = uniform_z(p);
    const auto policy = always_move(p);
    const Field h = mass_rhs(p, compute_flows(p, policy, z, delays), z);
    const auto a = integrate_mass(p, h);
    const auto b = integrate_flows(p, policy, z, delays);
    CHECK_FALSE(balance_violation(a).has_value());
    for (std::size_t n = 0; n < a.mass.values().size(); ++n) {
        CHECK(a.mass.values()[n] == doctest::Approx(b.mass.values()[n]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("mass bound is enforced") {
    Problem p = fixtures::diamond(100);
    p.scenario.rho_max = 0.3;
    try {
        const ValueTable stay{zeros(p), IndexTable(p.paths.pair_count(), p.grid.size(), kNever)};
        integrate_flows(p, stay, uniform_z(p), uniform_delays(p));
        FAIL("expected MassBoundExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MassBoundExceeded);
    }
}

TEST_CASE("psi of the zero field starts at zero") {
    const Problem p = fixtures::diamond(200);
    const auto s = apply_psi(p, zeros(p));
    for (std::size_t k = 0; k < s.ledger.mass.rows(); ++k) CHECK(s.ledger.mass(k, 0) == 0.0);
    CHECK(s.ledger.clip_count == 0);
    CHECK_FALSE(balance_violation(s.ledger).has_value());
    CHECK(verify_membership(p, s.ledger.mass).ok());
}

TEST_CASE("without congestion psi ignores its input") {
    auto doc = fixtures::diamond_json(200);
    doc["model"]["phi"]["default"]["a"] = 0.0;
    const Problem p = fixtures::make(doc);
    std::mt19937_64 rng(21);
    CHECK(apply_psi(p, fixtures::random_admissible(p, rng)).ledger.mass == apply_psi(p, zeros(p)).ledger.mass);
}

TEST_CASE("psi output respects the flow bound and the admissible set") {
    const Problem p = fixtures::diamond(400);
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = apply_psi(p, fixtures::random_admissible(p, rng));
        for (double f : s.flows.values()) CHECK(f <= p.lambda_max() + 1e-12);
        CHECK(s.ledger.clip_count == 0);
        CHECK_FALSE(balance_violation(s.ledger).has_value());
        const auto m = verify_membership(p, s.ledger.mass);
        CHECK(m.mass_ok);
        CHECK(m.nonnegative_ok);
        CHECK(m.lipschitz_ok);
    }
}

TEST_CASE("psi is deterministic") {
    const Problem p = fixtures::diamond(300);
    std::mt19937_64 rng(23);
    const Field rho = fixtures::random_admissible(p, rng);
    const auto a = apply_psi(p, rho);
    const auto b = apply_psi(p, rho);
    CHECK(a.ledger.mass == b.ledger.mass);
    CHECK(a.flows == b.flows);
    CHECK(a.policy.arrival == b.policy.arrival);
}

TEST_CASE("psi is Lipschitz in the input on a fixed grid") {
    const Problem p = fixtures::diamond(300);
    std::mt19937_64 rng(24);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const Field a = fixtures::random_admissible(p, rng);
        Field b = a;
        for (double& x : b.values()) x *= 0.98;
        const double din = residual(a, b);
        const double dout = residual(apply_psi(p, a).ledger.mass, apply_psi(p, b).ledger.mass);
        worst = std::max(worst, dout / din);
    }
    CHECK(worst < 50.0);
}
