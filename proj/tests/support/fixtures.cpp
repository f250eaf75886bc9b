#include "fixtures.hpp"

#include <algorithm>

namespace fixtures {

using nlohmann::json;

namespace {
json edge(const char* id, const char* tail, const char* head, double length = 1.0, double capacity = 2.0) {
    return json{{"id", id}, {"tail", tail}, {"head", head}, {"length", length}, {"capacity", capacity}};
}

json model(double horizon, int steps, double alpha, double a) {
    return json{{"horizon", horizon},
                {"steps", steps},
                {"alpha", alpha},
                {"beta", 1.0},
                {"eta", 1.0},
                {"rho_max", 20.0},
                {"lambda", {{"family", "constant"}, {"value", 1.0}}},
                {"phi", {{"default", {{"family", "linear"}, {"a", a}}}}}};
}
}  // namespace

json diamond_json(int steps) {
    return json{{"network",
                 {{"vertices", {"o", "v1", "v2", "d"}},
                  {"origin", "o"},
                  {"destination", "d"},
                  {"edges",
                   {edge("e1", "o", "v1"), edge("e2", "o", "v2"), edge("e3", "v1", "v2"), edge("e4", "v1", "d"),
                    edge("e5", "v2", "d")}}}},
                {"model", model(10.0, steps, 1.0, 0.1)},
                {"solver", {{"gamma", 0.5}, {"max_iter", 500}}}};
}

json symmetric_json(int steps) {
    return json{{"network",
                 {{"vertices", {"o", "a", "b", "d"}},
                  {"origin", "o"},
                  {"destination", "d"},
                  {"edges", {edge("e1", "o", "a"), edge("e2", "o", "b"), edge("e3", "a", "d"), edge("e4", "b", "d")}}}},
                {"model", model(10.0, steps, 1.0, 0.1)},
                {"solver", {{"gamma", 0.5}}}};
}

json single_edge_json(double horizon, int steps, double length, double alpha, double a) {
    return json{{"network",
                 {{"vertices", {"o", "d"}},
                  {"origin", "o"},
                  {"destination", "d"},
                  {"edges", {edge("e1", "o", "d", length)}}}},
                {"model", model(horizon, steps, alpha, a)}};
}

json chain_json(double horizon, int steps, double alpha, double a) {
    return json{{"network",
                 {{"vertices", {"o", "v", "d"}},
                  {"origin", "o"},
                  {"destination", "d"},
                  {"edges", {edge("e1", "o", "v"), edge("e2", "v", "d")}}}},
                {"model", model(horizon, steps, alpha, a)}};
}

mfgnet::Problem make(const json& doc) { return mfgnet::load_scenario(doc); }

mfgnet::Problem diamond(int steps) { return make(diamond_json(steps)); }

int pair_of(const mfgnet::Problem& p, const std::string& label) {
    for (std::size_t k = 0; k < p.paths.pair_count(); ++k) {
        if (p.pair_label(static_cast<int>(k)) == label) return static_cast<int>(k);
    }
    return -1;
}

mfgnet::Field random_admissible(const mfgnet::Problem& p, std::mt19937_64& rng) {
    const double step = 0.9 * 3.0 * p.lambda_max() * p.grid.dt();
    const double cap = p.scenario.rho_max / static_cast<double>(p.paths.pair_count());
    std::uniform_real_distribution<double> inc(-step, step);
    std::uniform_real_distribution<double> start(0.0, cap);
    mfgnet::Field rho(p.paths.pair_count(), p.grid.size());
    for (std::size_t k = 0; k < rho.rows(); ++k) {
        rho(k, 0) = start(rng);
        for (std::size_t i = 1; i < rho.cols(); ++i) rho(k, i) = std::clamp(rho(k, i - 1) + inc(rng), 0.0, cap);
    }
    return rho;
}

}  // namespace fixtures
