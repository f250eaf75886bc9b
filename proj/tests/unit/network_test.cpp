#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "doctest.h"

#include "mfgnet/errors.hpp"
#include "mfgnet/network.hpp"

using namespace mfgnet;

namespace {

NetworkSpec diamond_spec() {
    NetworkSpec s;
    s.vertices = {"o", "v1", "v2", "d"};
    s.origin = "o";
    s.destination = "d";
    s.edges = {{"e1", "o", "v1", 1, 2}, {"e2", "o", "v2", 1, 2}, {"e3", "v1", "v2", 1, 2},
               {"e4", "v1", "d", 1, 2}, {"e5", "v2", "d", 1, 2}};
    return s;
}

std::vector<std::string> ids(const Network& net, const std::vector<int>& path) {
    std::vector<std::string> out;
    for (int e : path) out.push_back(net.edge(e).id);
    return out;
}

ErrorCode code_of(const NetworkSpec& spec) {
    try {
        build_network(spec);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

/// Brute force: minimum total length over every vertex sequence reaching d.
double brute_distance(const Network& net, int v) {
    if (v == net.destination()) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int e : net.out_edges(v)) best = std::min(best, net.edge(e).length + brute_distance(net, net.edge(e).head));
    return best;
}

}  // namespace

TEST_CASE("test network builds and lists the three paths") {
    const Network net = build_network(diamond_spec());
    const PathSet ps = enumerate_paths(net);
    REQUIRE(ps.path_count() == 3);
    CHECK(ids(net, ps.path(0)) == std::vector<std::string>{"e1", "e4"});
    CHECK(ids(net, ps.path(1)) == std::vector<std::string>{"e2", "e5"});
    CHECK(ids(net, ps.path(2)) == std::vector<std::string>{"e1", "e3", "e5"});
    CHECK(ps.pair_count() == 7);

    std::size_t xi = 0;
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
        for (std::size_t p = 0; p < ps.path_count(); ++p) xi += ps.incidence(static_cast<int>(e), static_cast<int>(p));
    }
    CHECK(xi == ps.pair_count());
    CHECK(net.edge_count() <= xi);
    CHECK(xi <= net.edge_count() * ps.path_count());
}

TEST_CASE("single edge network has one path and one pair") {
    NetworkSpec s{{"o", "d"}, {{"e1", "o", "d", 1, 1}}, "o", "d"};
    const Network net = build_network(s);
    const PathSet ps = enumerate_paths(net);
    CHECK(ps.path_count() == 1);
    CHECK(ps.pair_count() == 1);
}

TEST_CASE("parallel edges give an identity incidence table") {
    NetworkSpec s{{"o", "d"}, {{"a", "o", "d", 1, 1}, {"b", "o", "d", 2, 1}}, "o", "d"};
    const Network net = build_network(s);
    const PathSet ps = enumerate_paths(net);
    REQUIRE(ps.path_count() == 2);
    for (int e = 0; e < 2; ++e) {
        for (int p = 0; p < 2; ++p) CHECK(ps.incidence(e, p) == (e == p));
    }
    CHECK(net.shortest_remaining_length(net.origin()) == 1.0);
}

TEST_CASE("structural errors") {
    auto cyc = diamond_spec();
    cyc.edges.push_back({"e6", "d", "o", 1, 2});
    CHECK(code_of(cyc) == ErrorCode::CycleDetected);

    auto iso = diamond_spec();
    iso.vertices.push_back("x");
    CHECK(code_of(iso) == ErrorCode::Unreachable);

    auto dead_end = diamond_spec();
    dead_end.vertices.push_back("x");
    dead_end.edges.push_back({"e6", "v1", "x", 1, 2});
    CHECK(code_of(dead_end) == ErrorCode::Unreachable);

    auto loop = diamond_spec();
    loop.edges[2].head = "v1";
    CHECK(code_of(loop) == ErrorCode::BadEdge);

    auto zero_len = diamond_spec();
    zero_len.edges[0].length = 0.0;
    CHECK(code_of(zero_len) == ErrorCode::BadEdge);

    auto neg_cap = diamond_spec();
    neg_cap.edges[4].capacity = -1.0;
    CHECK(code_of(neg_cap) == ErrorCode::BadEdge);

    auto ghost = diamond_spec();
    ghost.edges[0].tail = "nowhere";
    CHECK(code_of(ghost) == ErrorCode::BadEdge);

    auto dup = diamond_spec();
    dup.edges[1].id = "e1";
    CHECK(code_of(dup) == ErrorCode::BadEdge);
}

TEST_CASE("shortest remaining length") {
    const Network net = build_network(diamond_spec());
    CHECK(net.shortest_remaining_length(net.vertex_index("v1")) == 1.0);
    CHECK(net.shortest_remaining_length(net.vertex_index("d")) == 0.0);
    CHECK(net.shortest_remaining_length(net.vertex_index("o")) == 2.0);
}

TEST_CASE("shortest remaining length agrees with brute force on random DAGs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        NetworkSpec s;
        const int nv = 6;
        for (int v = 0; v < nv; ++v) s.vertices.push_back("v" + std::to_string(v));
        s.origin = "v0";
        s.destination = "v" + std::to_string(nv - 1);
        int id = 0;
        for (int a = 0; a < nv - 1; ++a) {
            s.edges.push_back({"e" + std::to_string(id++), s.vertices[a], s.vertices[a + 1], len(rng), 1.0});
            for (int b = a + 2; b < nv; ++b) {
                if (rng() % 2) s.edges.push_back({"e" + std::to_string(id++), s.vertices[a], s.vertices[b], len(rng), 1.0});
            }
        }
        const Network net = build_network(s);
        for (std::size_t v = 0; v < net.vertex_count(); ++v) {
            CHECK(net.shortest_remaining_length(static_cast<int>(v)) ==
                  doctest::Approx(brute_distance(net, static_cast<int>(v))).epsilon(1e-14));
        }
        for (const auto& e : net.edges()) {
            CHECK(net.shortest_remaining_length(e.tail) <= e.length + net.shortest_remaining_length(e.head) + 1e-12);
        }
        const PathSet ps = enumerate_paths(net);
        for (const auto& path : ps.paths()) {
            CHECK(net.edge(path.front()).tail == net.origin());
            CHECK(net.edge(path.back()).head == net.destination());
            for (std::size_t k = 0; k < path.size(); ++k) {
                const auto& e = net.edge(path[k]);
                CHECK(net.topological_rank(e.tail) < net.topological_rank(e.head));
                if (k > 0) CHECK(net.edge(path[k - 1]).head == e.tail);
            }
        }
    }
}

TEST_CASE("path order does not depend on the order edges are declared") {
    auto spec = diamond_spec();
    const Network ref_net = build_network(spec);
    const PathSet ref = enumerate_paths(ref_net);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(spec.edges.begin(), spec.edges.end(), rng);
        const Network net = build_network(spec);
        const PathSet ps = enumerate_paths(net);
        REQUIRE(ps.path_count() == ref.path_count());
        for (std::size_t p = 0; p < ps.path_count(); ++p) {
            CHECK(ids(net, ps.path(static_cast<int>(p))) == ids(ref_net, ref.path(static_cast<int>(p))));
        }
    }
}

TEST_CASE("neighbouring edges along a path") {
    const Network net = build_network(diamond_spec());
    const PathSet ps = enumerate_paths(net);
    const int e1 = *net.find_edge("e1");
    const int e2 = *net.find_edge("e2");
    const int e3 = *net.find_edge("e3");
    const int e4 = *net.find_edge("e4");
    const int e5 = *net.find_edge("e5");
    CHECK(ps.prec_edge(2, e3) == e1);
    CHECK(ps.succ_edge(2, e3) == e5);
    CHECK(ps.last_edge(0) == e4);
    CHECK_FALSE(ps.prec_edge(1, e2).has_value());
    CHECK_FALSE(ps.succ_edge(1, e5).has_value());
    CHECK_THROWS_AS(ps.prec_edge(0, e3), Error);
    try {
        ps.succ_edge(1, e1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EdgeNotOnPath);
    }
}

TEST_CASE("path limit guard") {
    // k stacked diamonds have 2^k paths
    NetworkSpec s;
    const int k = 8;
    for (int i = 0; i <= k; ++i) {
        s.vertices.push_back("c" + std::to_string(i));
        if (i < k) s.vertices.push_back("m" + std::to_string(i));
    }
    for (int i = 0; i < k; ++i) {
        const auto a = "c" + std::to_string(i);
        const auto b = "c" + std::to_string(i + 1);
        const auto m = "m" + std::to_string(i);
        s.edges.push_back({"x" + std::to_string(i), a, b, 1, 1});
        s.edges.push_back({"y" + std::to_string(i), a, m, 1, 1});
        s.edges.push_back({"z" + std::to_string(i), m, b, 1, 1});
    }
    s.origin = "c0";
    s.destination = "c" + std::to_string(k);
    const Network net = build_network(s);
    CHECK(enumerate_paths(net).path_count() == 256);
    try {
        enumerate_paths(net, 100);
        FAIL("expected PathLimit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PathLimit);
    }
}

TEST_CASE("natural ordering of ids") {
    CHECK(natural_less("e2", "e10"));
    CHECK_FALSE(natural_less("e10", "e2"));
    CHECK(natural_less("a", "b"));
    CHECK(natural_less("e1", "e1a"));
    CHECK_FALSE(natural_less("e1", "e1"));
}
