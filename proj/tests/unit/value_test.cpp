#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

#include "mfgnet/errors.hpp"
#include "mfgnet/value.hpp"
#include "mfgnet/verify/oracle.hpp"

using namespace mfgnet;

namespace {

Field zeros(const Problem& p) { return Field(p.paths.pair_count(), p.grid.size()); }

/// max_e l^2 / (2 h (h - dt)) + sup phi, with h the shortest traverse time any
/// move can afford; returns infinity when h <= 2 dt (bound not informative).
double lipschitz_bound(const Problem& p) {
    double sup_phi = 0.0;
    for (const auto& c : p.scenario.congestion) sup_phi = std::max(sup_phi, c.sup_norm(p.scenario.rho_max));
    double worst = 0.0;
    for (const auto& e : p.network.edges()) {
        const double cap = p.scenario.alpha * p.network.shortest_remaining_length(e.tail) + sup_phi * p.grid.horizon();
        const double h = e.length * e.length / (2.0 * cap * (1.0 + 1e-12));
        if (h <= 2.0 * p.grid.dt()) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, e.length * e.length / (2.0 * h * (h - p.grid.dt())));
    }
    return worst + sup_phi;
}

double max_quotient(const Field& v, double dt) {
    double q = 0.0;
    for (std::size_t k = 0; k < v.rows(); ++k) {
        for (std::size_t i = 0; i + 1 < v.cols(); ++i) q = std::max(q, std::abs(v(k, i + 1) - v(k, i)) / dt);
    }
    return q;
}

}  // namespace

TEST_CASE("congestion totals") {
    const Problem p = fixtures::diamond(50);
    const auto c0 = congestion_total(p, zeros(p));
    for (double m : c0.totals.values()) CHECK(m == 0.0);
    for (double v : c0.integral.values()) CHECK(v == 0.0);

    Field rho = zeros(p);
    const int e1p1 = fixtures::pair_of(p, "e1:p1");
    const int e1p3 = fixtures::pair_of(p, "e1:p3");
    for (std::size_t i = 0; i < rho.cols(); ++i) {
        rho(static_cast<std::size_t>(e1p1), i) = 0.3;
        rho(static_cast<std::size_t>(e1p3), i) = 0.7;
    }
    const auto c = congestion_total(p, rho);
    const auto e1 = static_cast<std::size_t>(*p.network.find_edge("e1"));
    CHECK(c.totals(e1, 10) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.cost(e1, 10) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(c.integral(e1, 50) == doctest::Approx(1.0).epsilon(1e-12));   // 0.1 * T

    CHECK(p.paths.pairs_on_edge(*p.network.find_edge("e5")).size() == 2);
    CHECK_THROWS_AS(congestion_total(p, Field(3, 51)), Error);
}

TEST_CASE("last edge closed form") {
    const Problem p = fixtures::make(fixtures::single_edge_json(1.0, 10, 1.0, 1.0));
    const auto v = value_backward(p, zeros(p));
    CHECK(v.values(0, 0) == 0.5);
    CHECK(v.arrival(0, 0) == 10);
    CHECK(v.values(0, 9) == 1.0);
    CHECK(v.arrival(0, 9) == kNever);
    CHECK(control(p, v, 0, 9) == 0.0);
    CHECK(control(p, v, 0, 0) == 1.0);
    CHECK(v.values(0, 10) == 1.0);   // alpha * distance at t = T
    CHECK(v.arrival(0, 10) == kNever);
    for (int i = 0; i <= 10; ++i) {
        const double t = p.grid.t(i);
        const double expect = i < 10 ? std::min(1.0, 1.0 / (2.0 * (1.0 - t))) : 1.0;
        CHECK(v.values(0, static_cast<std::size_t>(i)) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("value at the horizon is the stay penalty") {
    const Problem p = fixtures::diamond(40);
    std::mt19937_64 rng(11);
    const auto v = value_backward(p, fixtures::random_admissible(p, rng));
    for (std::size_t k = 0; k < p.paths.pair_count(); ++k) {
        const auto& e = p.network.edge(p.paths.pair(static_cast<int>(k)).edge);
        CHECK(v.values(k, 40) == p.scenario.alpha * p.network.shortest_remaining_length(e.tail));
        CHECK(v.arrival(k, 40) == kNever);
    }
}

TEST_CASE("two-edge chain matches a direct search over arrival pairs") {
    // alpha large: stopping is never optimal, so every plan reaches d at some (j1, j2).
    const int n = 12;
    const Problem p = fixtures::make(fixtures::chain_json(4.0, n, 50.0, 0.0));
    const auto v = value_backward(p, zeros(p));
    const auto t = p.grid.nodes();
    for (int i = 0; i < n - 1; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j1 = i + 1; j1 < n; ++j1) {
            best = std::min(best, 1.0 / (2.0 * (t[j1] - t[i])) + 1.0 / (2.0 * (t[n] - t[j1])));
        }
        CHECK(v.values(0, static_cast<std::size_t>(i)) == doctest::Approx(best).epsilon(1e-13));
    }
}

TEST_CASE("value_backward agrees exactly with enumeration on coarse grids") {
    for (int n : {4, 8, 12}) {
        const Problem p = fixtures::diamond(n);
        std::mt19937_64 rng(static_cast<unsigned>(n));
        for (int trial = 0; trial < 3; ++trial) {
            const Field rho = trial == 0 ? zeros(p) : fixtures::random_admissible(p, rng);
            const auto fast = value_backward(p, rho);
            const auto slow = verify::enumerate_values(p, rho);
            CHECK(fast.values == slow.values);
            CHECK(fast.arrival == slow.arrival);
        }
    }
}

TEST_CASE("off-grid queries interpolate") {
    const Problem p = fixtures::make(fixtures::single_edge_json(1.0, 10, 1.0, 1.0));
    ValueTable v{Field(1, 11), IndexTable(1, 11, kNever)};
    v.values(0, 3) = 1.0;
    v.values(0, 4) = 3.0;
    CHECK(value_at(v, p.grid, 0, p.grid.t(3)) == 1.0);
    CHECK(value_at(v, p.grid, 0, 0.35) == doctest::Approx(2.0));
    ValueTable flat{Field(1, 11, 2.5), IndexTable(1, 11, kNever)};
    for (double t : {0.0, 0.123, 0.5, 0.999, 1.0}) CHECK(value_at(flat, p.grid, 0, t) == 2.5);
    CHECK_THROWS_AS(value_at(v, p.grid, 0, 1.5), Error);
    CHECK_THROWS_AS(value_at(v, p.grid, 0, -0.1), Error);
}

TEST_CASE("policy invariants on random admissible masses") {
    const Problem p = fixtures::diamond(200);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto v = value_backward(p, fixtures::random_admissible(p, rng));
        for (std::size_t k = 0; k < p.paths.pair_count(); ++k) {
            const auto& e = p.network.edge(p.paths.pair(static_cast<int>(k)).edge);
            int prev = -1;
            bool stopped = false;
            for (int i = 0; i <= p.grid.steps(); ++i) {
                const int a = v.arrival(k, static_cast<std::size_t>(i));
                if (a == kNever) {
                    stopped = true;
                    continue;
                }
                CHECK_FALSE(stopped);
                CHECK(a > i);
                CHECK(a >= prev);
                prev = a;
                CHECK(control(p, v, static_cast<int>(k), i) >= e.length / p.grid.horizon());
            }
            for (double x : v.values.row(k)) CHECK(x >= 0.0);
        }
    }
}

TEST_CASE("value bound and time regularity do not depend on the mass field") {
    auto doc = fixtures::diamond_json(400);
    doc["model"]["phi"]["default"]["a"] = 0.01;
    const Problem p = fixtures::make(doc);
    const double bound = lipschitz_bound(p);
    REQUIRE(std::isfinite(bound));
    double sup_phi = 0.0;
    for (const auto& c : p.scenario.congestion) sup_phi = std::max(sup_phi, c.sup_norm(p.scenario.rho_max));
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 4; ++trial) {
        const Field rho = trial == 0 ? zeros(p) : fixtures::random_admissible(p, rng);
        const auto v = value_backward(p, rho);
        CHECK(max_quotient(v.values, p.grid.dt()) <= bound);
        for (std::size_t k = 0; k < p.paths.pair_count(); ++k) {
            const auto& e = p.network.edge(p.paths.pair(static_cast<int>(k)).edge);
            const double cap = p.scenario.alpha * p.network.shortest_remaining_length(e.tail) + sup_phi * p.grid.horizon();
            for (double x : v.values.row(k)) CHECK(x <= cap + 1e-12);
        }
    }
}

TEST_CASE("value tables depend continuously on the mass field") {
    const Problem p = fixtures::diamond(200);
    std::mt19937_64 rng(9);
    const double a_max = 0.1;
    const double c = a_max * static_cast<double>(p.paths.path_count()) * p.grid.horizon();
    for (int trial = 0; trial < 10; ++trial) {
        const Field rho = fixtures::random_admissible(p, rng);
        Field moved = rho;
        std::uniform_real_distribution<double> d(-1e-3, 1e-3);
        double size = 0.0;
        for (auto& x : moved.values()) {
            const double delta = d(rng);
            x += delta;
            size = std::max(size, std::abs(delta));
        }
        const auto v0 = value_backward(p, rho);
        const auto v1 = value_backward(p, moved);
        double dev = 0.0;
        for (std::size_t k = 0; k < v0.values.values().size(); ++k) {
            dev = std::max(dev, std::abs(v0.values.values()[k] - v1.values.values()[k]));
        }
        CHECK(dev <= c * size + 1e-12);
    }
}

TEST_CASE("value_backward is deterministic") {
    const Problem p = fixtures::diamond(100);
    std::mt19937_64 rng(1);
    const Field rho = fixtures::random_admissible(p, rng);
    const auto a = value_backward(p, rho);
    const auto b = value_backward(p, rho);
    CHECK(a.values == b.values);
    CHECK(a.arrival == b.arrival);
}
