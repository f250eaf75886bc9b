#include "mfgnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mfgnet/errors.hpp"

namespace mfgnet {

using nlohmann::json;

namespace {

constexpr double kSimplexRelTol = 1e-9;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw Error(ErrorCode::Parse, where + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw Error(ErrorCode::Parse, where + ": expected a number");
    return v.get<double>();
}

double number_at(const json& obj, const char* key, const std::string& where) {
    return number(require(obj, key, where), where + "." + key);
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return number(obj.at(key), where + "." + key);
}

int integer_at(const json& obj, const char* key, const std::string& where) {
    const auto& v = require(obj, key, where);
    if (!v.is_number_integer()) throw Error(ErrorCode::Parse, where + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string string_at(const json& obj, const char* key, const std::string& where) {
    const auto& v = require(obj, key, where);
    if (!v.is_string()) throw Error(ErrorCode::Parse, where + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw Error(ErrorCode::Parse, where + ": expected an array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, where));
    return out;
}

void expect_object(const json& v, const std::string& where) {
    if (!v.is_object()) throw Error(ErrorCode::Parse, where + ": expected an object");
}

NetworkSpec parse_network(const json& doc) {
    const auto& net = require(doc, "network", "scenario");
    expect_object(net, "network");
    NetworkSpec spec;
    const auto& vertices = require(net, "vertices", "network");
    if (!vertices.is_array()) throw Error(ErrorCode::Parse, "network.vertices: expected an array");
    for (const auto& v : vertices) {
        if (!v.is_string()) throw Error(ErrorCode::Parse, "network.vertices: expected strings");
        spec.vertices.push_back(v.get<std::string>());
    }
    spec.origin = string_at(net, "origin", "network");
    spec.destination = string_at(net, "destination", "network");
    const auto& edges = require(net, "edges", "network");
    if (!edges.is_array()) throw Error(ErrorCode::Parse, "network.edges: expected an array");
    for (const auto& e : edges) {
        expect_object(e, "network.edges[]");
        EdgeSpec es;
        es.id = string_at(e, "id", "network.edges[]");
        const std::string where = "network.edges[" + es.id + "]";
        es.tail = string_at(e, "tail", where);
        es.head = string_at(e, "head", where);
        es.length = number_at(e, "length", where);
        es.capacity = number_at(e, "capacity", where);
        spec.edges.push_back(std::move(es));
    }
    return spec;
}

ThroughputSpec parse_throughput(const json& v) {
    expect_object(v, "model.lambda");
    ThroughputSpec t;
    const std::string family = string_at(v, "family", "model.lambda");
    if (family == "constant") {
        t.family = ThroughputSpec::Family::Constant;
        t.value = number_at(v, "value", "model.lambda");
    } else if (family == "sinusoidal") {
        t.family = ThroughputSpec::Family::Sinusoidal;
        t.mean = number_at(v, "mean", "model.lambda");
        t.amplitude = number_at(v, "amplitude", "model.lambda");
        t.period = number_at(v, "period", "model.lambda");
        t.phase = number_or(v, "phase", 0.0, "model.lambda");
    } else if (family == "table") {
        t.family = ThroughputSpec::Family::Table;
        t.times = number_list(require(v, "times", "model.lambda"), "model.lambda.times");
        t.values = number_list(require(v, "values", "model.lambda"), "model.lambda.values");
        if (t.times.size() != t.values.size() || t.times.empty()) {
            throw Error(ErrorCode::Parse, "model.lambda: 'times' and 'values' must be non-empty and of equal length");
        }
    } else {
        throw Error(ErrorCode::Parse, "model.lambda: unknown family '" + family + "'");
    }
    return t;
}

CongestionCost parse_congestion(const json& v, const std::string& where) {
    expect_object(v, where);
    CongestionCost c;
    const std::string family = string_at(v, "family", where);
    if (family == "linear") {
        c.family = CongestionCost::Family::Linear;
    } else if (family == "affine_saturating") {
        c.family = CongestionCost::Family::Saturating;
    } else {
        throw Error(ErrorCode::Parse, where + ": unknown family '" + family + "'");
    }
    c.coefficient = number_at(v, "a", where);
    return c;
}

SpeedLimit parse_speed_limit(const json& v, const std::string& where) {
    expect_object(v, where);
    SpeedLimit s;
    const std::string family = string_at(v, "family", where);
    if (family == "reciprocal") {
        s.family = SpeedLimit::Family::Reciprocal;
        s.coefficient = number_at(v, "c", where);
    } else if (family == "table") {
        s.family = SpeedLimit::Family::Table;
        s.masses = number_list(require(v, "masses", where), where + ".masses");
        s.speeds = number_list(require(v, "speeds", where), where + ".speeds");
        if (s.masses.size() != s.speeds.size() || s.masses.size() < 2) {
            throw Error(ErrorCode::Parse, where + ": 'masses' and 'speeds' need equal length >= 2");
        }
    } else {
        throw Error(ErrorCode::Parse, where + ": unknown family '" + family + "'");
    }
    return s;
}

/// {"default": {...}, "edges": {"e3": {...}}} -> one entry per edge.
template <typename T, typename ParseFn>
std::vector<T> per_edge(const json& section, const Network& net, const std::string& where, ParseFn parse,
                        const T& fallback) {
    expect_object(section, where);
    T base = fallback;
    if (section.contains("default")) base = parse(section.at("default"), where + ".default");
    std::vector<T> out(net.edge_count(), base);
    if (section.contains("edges")) {
        const auto& edges = section.at("edges");
        expect_object(edges, where + ".edges");
        for (const auto& [id, spec] : edges.items()) {
            auto e = net.find_edge(id);
            if (!e) throw Error(ErrorCode::Parse, where + ".edges: unknown edge '" + id + "'");
            out[static_cast<std::size_t>(*e)] = parse(spec, where + ".edges." + id);
        }
    } else if (!section.contains("default")) {
        throw Error(ErrorCode::Parse, where + ": needs 'default' or 'edges'");
    }
    return out;
}

json congestion_json(const CongestionCost& c) {
    return json{{"family", c.family == CongestionCost::Family::Linear ? "linear" : "affine_saturating"},
                {"a", c.coefficient}};
}

json speed_limit_json(const SpeedLimit& s) {
    if (s.family == SpeedLimit::Family::Reciprocal) return json{{"family", "reciprocal"}, {"c", s.coefficient}};
    return json{{"family", "table"}, {"masses", s.masses}, {"speeds", s.speeds}};
}

json throughput_json(const ThroughputSpec& t) {
    switch (t.family) {
        case ThroughputSpec::Family::Constant: return json{{"family", "constant"}, {"value", t.value}};
        case ThroughputSpec::Family::Sinusoidal:
            return json{{"family", "sinusoidal"}, {"mean", t.mean}, {"amplitude", t.amplitude},
                        {"period", t.period}, {"phase", t.phase}};
        case ThroughputSpec::Family::Table: return json{{"family", "table"}, {"times", t.times}, {"values", t.values}};
    }
    return {};
}

void sample_throughput(Problem& p) {
    p.lambda.resize(p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i) p.lambda[i] = p.scenario.throughput.at(p.grid.t(static_cast<int>(i)));
}

void resolve_defaults(Problem& p, bool has_tol, bool has_eps, bool has_floor) {
    auto& s = p.scenario;
    if (!has_tol) s.solver.tol = 1e-3 * s.rho_max;
    if (!has_floor) s.constrained.mass_floor = 1e-6 * s.rho_max;
    if (!has_eps) {
        double sup_phi = 0.0;
        for (const auto& c : s.congestion) sup_phi = std::max(sup_phi, c.sup_norm(s.rho_max));
        const double scale = s.alpha * p.network.shortest_remaining_length(p.network.origin()) + sup_phi * s.horizon;
        s.solver.eps_tie = 1e-9 * std::max(1.0, scale);
    }
}

void add(ValidationReport& r, std::string name, bool ok, std::string detail) {
    r.checks.push_back(Check{std::move(name), ok, std::move(detail)});
}

void run_checks(const Problem& p, ValidationReport& r) {
    const auto& s = p.scenario;

    add(r, "model parameters", s.alpha > 0 && s.beta > 0 && s.eta > 0 && std::isfinite(s.alpha) &&
                                   std::isfinite(s.beta) && std::isfinite(s.eta),
        "alpha=" + fmt(s.alpha) + ", beta=" + fmt(s.beta) + ", eta=" + fmt(s.eta) + " (all must be > 0)");

    bool lambda_ok = !p.lambda.empty();
    for (double l : p.lambda) lambda_ok = lambda_ok && std::isfinite(l) && l > 0.0;
    if (s.throughput.family == ThroughputSpec::Family::Table) {
        for (double l : s.throughput.values) lambda_ok = lambda_ok && l > 0.0;
        for (std::size_t k = 1; k < s.throughput.times.size(); ++k) {
            lambda_ok = lambda_ok && s.throughput.times[k] > s.throughput.times[k - 1];
        }
    }
    if (s.throughput.family == ThroughputSpec::Family::Sinusoidal) {
        lambda_ok = lambda_ok && s.throughput.mean > std::abs(s.throughput.amplitude) && s.throughput.period > 0;
    }
    add(r, "assumption 2.1.1", lambda_ok,
        lambda_ok ? "lambda(t) > 0 on [0,T]; min " + fmt(p.lambda_min()) + ", max " + fmt(p.lambda_max())
                  : "lambda(t) > 0 for all t in [0,T] is violated");

    bool rho0_ok = true;
    std::string rho0_detail = s.rho0.empty() ? "rho(0) = 0" : "explicitly overridden";
    std::vector<double> edge_mass(p.network.edge_count(), 0.0);
    for (const auto& [label, value] : s.rho0) {
        bool found = false;
        for (std::size_t k = 0; k < p.paths.pair_count(); ++k) {
            if (p.pair_label(static_cast<int>(k)) == label) {
                found = true;
                edge_mass[static_cast<std::size_t>(p.paths.pair(static_cast<int>(k)).edge)] += value;
            }
        }
        if (!found || !(value >= 0.0)) {
            rho0_ok = false;
            rho0_detail = "invalid initial mass entry '" + label + "'";
        }
    }
    for (double m : edge_mass) {
        if (m > s.rho_max) {
            rho0_ok = false;
            rho0_detail = "initial edge mass exceeds rho_max";
        }
    }
    add(r, "assumption 2.1.2", rho0_ok, rho0_detail);

    bool phi_ok = s.congestion.size() == p.network.edge_count();
    for (const auto& c : s.congestion) phi_ok = phi_ok && std::isfinite(c.coefficient) && c.coefficient >= 0.0;
    add(r, "assumption 2.1.3", phi_ok,
        phi_ok ? "congestion costs nonnegative and Lipschitz on [0, rho_max]" : "congestion coefficients must be finite and >= 0");

    const double lbar = p.lambda_max();
    const bool mass_cap = s.rho_max > lbar * s.horizon;
    const bool flow_cap = p.network.min_capacity() > lbar;
    std::string cap_detail;
    if (!mass_cap) cap_detail = "rho_max <= lambda_bar*T (" + fmt(s.rho_max) + " <= " + fmt(lbar * s.horizon) + ")";
    if (!flow_cap) {
        if (!cap_detail.empty()) cap_detail += "; ";
        cap_detail += "some capacity C_e <= lambda_bar (" + fmt(p.network.min_capacity()) + " <= " + fmt(lbar) + ")";
    }
    if (cap_detail.empty()) {
        cap_detail = "rho_max=" + fmt(s.rho_max) + " > lambda_bar*T=" + fmt(lbar * s.horizon) +
                     "; min C_e=" + fmt(p.network.min_capacity()) + " > lambda_bar=" + fmt(lbar);
    }
    add(r, "assumption 2.1.4", mass_cap && flow_cap, cap_detail);

    const auto z0 = p.initial_preference();
    bool z0_ok = z0.size() == p.paths.path_count();
    double z0_sum = 0.0;
    for (double z : z0) {
        z0_ok = z0_ok && z >= 0.0;
        z0_sum += z;
    }
    const double l0 = p.lambda.empty() ? 0.0 : p.lambda.front();
    z0_ok = z0_ok && std::abs(z0_sum - l0) <= kSimplexRelTol * std::max(1.0, l0);
    add(r, "initial preference simplex", z0_ok,
        "sum z0 = " + fmt(z0_sum) + ", lambda(0) = " + fmt(l0) + (s.z0_uniform ? " (uniform split)" : ""));

    const auto& sv = s.solver;
    add(r, "solver settings", sv.gamma > 0 && sv.gamma <= 1 && sv.tol > 0 && sv.max_iter >= 1 && sv.eps_tie >= 0,
        "gamma=" + fmt(sv.gamma) + " in ]0,1], tol=" + fmt(sv.tol) + " > 0, max_iter=" + std::to_string(sv.max_iter) +
            " >= 1, eps_tie=" + fmt(sv.eps_tie) + " >= 0");

    const auto& c = s.constrained;
    bool limits_ok = c.limits.size() == p.network.edge_count() && c.mass_floor > 0 &&
                     c.delay_cap_fraction > 0 && c.delay_cap_fraction <= 1;
    for (const auto& lim : c.limits) {
        if (lim.family == SpeedLimit::Family::Reciprocal) {
            limits_ok = limits_ok && lim.coefficient > 0 && std::isfinite(lim.coefficient);
        } else {
            for (std::size_t k = 0; k < lim.masses.size(); ++k) {
                limits_ok = limits_ok && lim.speeds[k] > 0 && lim.masses[k] >= 0;
                if (k > 0) limits_ok = limits_ok && lim.masses[k] > lim.masses[k - 1] && lim.speeds[k] < lim.speeds[k - 1];
            }
        }
    }
    add(r, "speed limits", limits_ok,
        std::string(c.enabled ? "enabled" : "disabled") +
            "; limits continuous, decreasing, strictly positive; mass floor " + fmt(c.mass_floor));
}

}  // namespace

double CongestionCost::operator()(double mass) const {
    if (family == Family::Saturating) return coefficient * std::min(mass, saturation);
    return coefficient * mass;
}

double CongestionCost::sup_norm(double rho_max) const { return coefficient * std::max(0.0, rho_max); }

double ThroughputSpec::at(double t) const {
    switch (family) {
        case Family::Constant: return value;
        case Family::Sinusoidal: return mean + amplitude * std::sin(2.0 * std::numbers::pi * t / period + phase);
        case Family::Table: {
            if (t <= times.front()) return values.front();
            if (t >= times.back()) return values.back();
            const auto it = std::upper_bound(times.begin(), times.end(), t);
            const auto k = static_cast<std::size_t>(it - times.begin());
            const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
            return values[k - 1] + w * (values[k] - values[k - 1]);
        }
    }
    return value;
}

double SpeedLimit::operator()(double mass) const {
    if (family == Family::Reciprocal) return coefficient / mass;
    if (mass <= masses.front()) return speeds.front();
    if (mass >= masses.back()) return speeds.back();
    const auto it = std::upper_bound(masses.begin(), masses.end(), mass);
    const auto k = static_cast<std::size_t>(it - masses.begin());
    const double w = (mass - masses[k - 1]) / (masses[k] - masses[k - 1]);
    return speeds[k - 1] + w * (speeds[k] - speeds[k - 1]);
}

double Problem::lambda_max() const {
    return lambda.empty() ? 0.0 : *std::max_element(lambda.begin(), lambda.end());
}

double Problem::lambda_min() const {
    return lambda.empty() ? 0.0 : *std::min_element(lambda.begin(), lambda.end());
}

std::vector<double> Problem::initial_preference() const {
    if (!scenario.z0_uniform) return scenario.z0_explicit;
    const double l0 = lambda.empty() ? 0.0 : lambda.front();
    return std::vector<double>(paths.path_count(), l0 / static_cast<double>(paths.path_count()));
}

std::string Problem::pair_label(int pair) const {
    const auto& pr = paths.pair(pair);
    return network.edge(pr.edge).id + ":" + paths.path_label(pr.path);
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed) return c.name + ": " + c.detail;
    }
    return {};
}

std::optional<Problem> parse_scenario(const json& doc, ValidationReport& report) {
    if (!doc.is_object()) throw Error(ErrorCode::Parse, "scenario: expected a JSON object");
    const NetworkSpec net_spec = parse_network(doc);
    const auto& model = require(doc, "model", "scenario");
    expect_object(model, "model");
    const json solver = doc.value("solver", json::object());
    const json constrained = doc.value("constrained", json::object());
    expect_object(solver, "solver");
    expect_object(constrained, "constrained");

    Problem p;
    auto& s = p.scenario;
    s.horizon = number_at(model, "horizon", "model");
    s.steps = integer_at(model, "steps", "model");
    s.alpha = number_at(model, "alpha", "model");
    s.beta = number_at(model, "beta", "model");
    s.eta = number_at(model, "eta", "model");
    s.rho_max = number_at(model, "rho_max", "model");
    s.throughput = parse_throughput(require(model, "lambda", "model"));

    s.solver.gamma = number_or(solver, "gamma", s.solver.gamma, "solver");
    s.solver.tol = number_or(solver, "tol", 0.0, "solver");
    if (solver.contains("max_iter")) s.solver.max_iter = integer_at(solver, "max_iter", "solver");
    s.solver.eps_tie = number_or(solver, "eps_tie", 0.0, "solver");
    if (solver.contains("path_limit")) {
        const int limit = integer_at(solver, "path_limit", "solver");
        if (limit < 1) throw Error(ErrorCode::Parse, "solver.path_limit: must be >= 1");
        s.solver.path_limit = static_cast<std::size_t>(limit);
    }

    bool grid_ok = std::isfinite(s.horizon) && s.horizon > 0 && s.steps >= 1;
    add(report, "time grid", grid_ok, "T=" + fmt(s.horizon) + " > 0, N=" + std::to_string(s.steps) + " >= 1");

    try {
        p.network = build_network(net_spec);
        p.paths = enumerate_paths(p.network, s.solver.path_limit);
        add(report, "network structure", true,
            std::to_string(p.network.vertex_count()) + " vertices, " + std::to_string(p.network.edge_count()) +
                " edges, " + std::to_string(p.paths.path_count()) + " paths, " +
                std::to_string(p.paths.pair_count()) + " edge-path pairs; acyclic and connected");
    } catch (const Error& e) {
        add(report, "network structure", false, e.what());
        return std::nullopt;
    }
    if (!grid_ok) return std::nullopt;

    // Sections that refer to edges by id need the network first.
    CongestionCost zero_cost;
    if (model.contains("phi")) {
        s.congestion = per_edge<CongestionCost>(model.at("phi"), p.network, "model.phi", parse_congestion, zero_cost);
    } else {
        s.congestion.assign(p.network.edge_count(), zero_cost);
    }
    for (auto& c : s.congestion) c.saturation = s.rho_max;

    if (model.contains("z0")) {
        const auto& z0 = model.at("z0");
        expect_object(z0, "model.z0");
        const std::string rule = string_at(z0, "rule", "model.z0");
        if (rule == "uniform") {
            s.z0_uniform = true;
        } else if (rule == "explicit") {
            s.z0_uniform = false;
            s.z0_explicit = number_list(require(z0, "values", "model.z0"), "model.z0.values");
        } else {
            throw Error(ErrorCode::Parse, "model.z0: unknown rule '" + rule + "'");
        }
    }
    if (model.contains("rho0")) {
        const auto& r0 = model.at("rho0");
        expect_object(r0, "model.rho0");
        for (const auto& [label, value] : r0.items()) s.rho0[label] = number(value, "model.rho0." + label);
    }

    s.constrained.enabled = constrained.value("enabled", false);
    SpeedLimit default_limit;
    if (constrained.contains("speed_limit")) {
        s.constrained.limits = per_edge<SpeedLimit>(constrained.at("speed_limit"), p.network, "constrained.speed_limit",
                                                    parse_speed_limit, default_limit);
    } else {
        s.constrained.limits.assign(p.network.edge_count(), default_limit);
    }
    s.constrained.mass_floor = number_or(constrained, "mass_floor", 0.0, "constrained");
    s.constrained.delay_cap_fraction =
        number_or(constrained, "delay_cap_fraction", s.constrained.delay_cap_fraction, "constrained");

    p.grid = TimeGrid(s.horizon, s.steps);
    sample_throughput(p);
    resolve_defaults(p, solver.contains("tol"), solver.contains("eps_tie"), constrained.contains("mass_floor"));
    run_checks(p, report);
    return p;
}

Problem load_scenario(const json& doc) {
    ValidationReport report;
    auto problem = parse_scenario(doc, report);
    if (!problem || !report.ok()) throw Error(ErrorCode::Validation, report.first_failure());
    return std::move(*problem);
}

namespace {
json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, "cannot open scenario file '" + file.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, file.string() + ": " + e.what());
    }
}
}  // namespace

Problem load_scenario(const std::filesystem::path& file) { return load_scenario(read_json_file(file)); }

ValidationReport check_scenario_file(const std::filesystem::path& file) {
    ValidationReport report;
    parse_scenario(read_json_file(file), report);
    return report;
}

json to_json(const Problem& p) {
    const auto& s = p.scenario;
    json vertices = json::array();
    for (const auto& v : p.network.vertices()) vertices.push_back(v);
    json edges = json::array();
    json phi_edges = json::object();
    json limit_edges = json::object();
    for (std::size_t e = 0; e < p.network.edge_count(); ++e) {
        const auto& edge = p.network.edges()[e];
        edges.push_back(json{{"id", edge.id},
                             {"tail", p.network.vertices()[static_cast<std::size_t>(edge.tail)]},
                             {"head", p.network.vertices()[static_cast<std::size_t>(edge.head)]},
                             {"length", edge.length},
                             {"capacity", edge.capacity}});
        phi_edges[edge.id] = congestion_json(s.congestion[e]);
        limit_edges[edge.id] = speed_limit_json(s.constrained.limits[e]);
    }
    json model{{"horizon", s.horizon},
               {"steps", s.steps},
               {"alpha", s.alpha},
               {"beta", s.beta},
               {"eta", s.eta},
               {"rho_max", s.rho_max},
               {"lambda", throughput_json(s.throughput)},
               {"phi", json{{"edges", phi_edges}}}};
    model["z0"] = s.z0_uniform ? json{{"rule", "uniform"}} : json{{"rule", "explicit"}, {"values", s.z0_explicit}};
    if (!s.rho0.empty()) {
        json r0 = json::object();
        for (const auto& [label, v] : s.rho0) r0[label] = v;
        model["rho0"] = r0;
    }
    return json{
        {"network",
         {{"vertices", vertices},
          {"origin", p.network.vertices()[static_cast<std::size_t>(p.network.origin())]},
          {"destination", p.network.vertices()[static_cast<std::size_t>(p.network.destination())]},
          {"edges", edges}}},
        {"model", model},
        {"solver",
         {{"gamma", s.solver.gamma},
          {"tol", s.solver.tol},
          {"max_iter", s.solver.max_iter},
          {"eps_tie", s.solver.eps_tie},
          {"path_limit", s.solver.path_limit}}},
        {"constrained",
         {{"enabled", s.constrained.enabled},
          {"speed_limit", json{{"edges", limit_edges}}},
          {"mass_floor", s.constrained.mass_floor},
          {"delay_cap_fraction", s.constrained.delay_cap_fraction}}},
    };
}

Problem with_steps(const Problem& problem, int steps) {
    if (steps < 1) throw Error(ErrorCode::Validation, "time grid: N must be >= 1");
    Problem p = problem;
    p.scenario.steps = steps;
    p.grid = TimeGrid(p.scenario.horizon, steps);
    sample_throughput(p);
    return p;
}

int compute_k_steps(const Network& network, double alpha, const TimeGrid& grid) {
    const double raw = network.min_length() / (2.0 * alpha);
    int k = std::isfinite(raw) ? grid.floor_steps(std::min(raw, grid.horizon())) : grid.steps();
    return std::clamp(k, 1, grid.steps());
}

int compute_k_steps(const Problem& problem) {
    return compute_k_steps(problem.network, problem.scenario.alpha, problem.grid);
}

}  // namespace mfgnet
