#include "mfgnet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mfgnet/errors.hpp"

namespace mfgnet {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& token) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) throw Error(ErrorCode::Io, "bad number '" + token + "'");
    return value;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + file.string() + "'");
    return out;
}

void write_json(const std::filesystem::path& file, const json& doc) {
    auto out = open_out(file);
    out << doc.dump(2) << '\n';
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + file.string() + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, file.string() + ": empty file");
    table.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::ShapeMismatch, file.string() + ":" + std::to_string(lineno) + ": expected " +
                                                      std::to_string(table.header.size()) + " columns");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_csv(const std::filesystem::path& file, const CsvTable& table) {
    auto out = open_out(file);
    for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

CsvTable field_to_csv(const TimeGrid& grid, const Field& field, const std::vector<std::string>& labels,
                      const std::string& prefix) {
    CsvTable t;
    t.header.push_back("t");
    for (const auto& l : labels) t.header.push_back(prefix + "[" + l + "]");
    for (std::size_t i = 0; i < field.cols(); ++i) {
        std::vector<double> row{grid.t(static_cast<int>(i))};
        for (std::size_t r = 0; r < field.rows(); ++r) row.push_back(field(r, i));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<std::string> pair_labels(const Problem& problem) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < problem.paths.pair_count(); ++k) out.push_back(problem.pair_label(static_cast<int>(k)));
    return out;
}

std::vector<std::string> path_labels(const Problem& problem) {
    std::vector<std::string> out;
    for (std::size_t p = 0; p < problem.paths.path_count(); ++p) out.push_back(problem.paths.path_label(static_cast<int>(p)));
    return out;
}

Field read_mass_csv(const Problem& problem, const std::filesystem::path& file) {
    const auto table = read_csv(file);
    const auto labels = pair_labels(problem);
    if (table.header.size() != labels.size() + 1 || table.header[0] != "t") {
        throw Error(ErrorCode::ShapeMismatch, file.string() + ": expected a time column and " +
                                                  std::to_string(labels.size()) + " mass columns");
    }
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (table.header[k + 1] != "rho[" + labels[k] + "]") {
            throw Error(ErrorCode::ShapeMismatch, file.string() + ": column " + std::to_string(k + 2) + " is '" +
                                                      table.header[k + 1] + "', expected 'rho[" + labels[k] + "]'");
        }
    }
    if (table.rows.size() != problem.grid.size()) {
        throw Error(ErrorCode::ShapeMismatch, file.string() + ": " + std::to_string(table.rows.size()) +
                                                  " rows, grid has " + std::to_string(problem.grid.size()) + " nodes");
    }
    Field mass(labels.size(), problem.grid.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double t = problem.grid.t(static_cast<int>(i));
        if (std::abs(table.rows[i][0] - t) > 1e-9 * std::max(1.0, problem.grid.horizon())) {
            throw Error(ErrorCode::ShapeMismatch, file.string() + ": row " + std::to_string(i + 1) +
                                                      " has t=" + format_number(table.rows[i][0]) + ", expected " +
                                                      format_number(t));
        }
        for (std::size_t k = 0; k < labels.size(); ++k) mass(k, i) = table.rows[i][k + 1];
    }
    return mass;
}

void write_stage_files(const std::filesystem::path& dir, const Problem& problem, const PsiStages& stages) {
    const auto pairs = pair_labels(problem);
    const auto paths = path_labels(problem);
    const auto& grid = problem.grid;
    write_csv(dir / "flows.csv", field_to_csv(grid, stages.flows, pairs, "f"));
    write_csv(dir / "values.csv", field_to_csv(grid, stages.policy.values, pairs, "V"));

    Field tau(stages.policy.arrival.rows(), stages.policy.arrival.cols());
    for (std::size_t k = 0; k < tau.rows(); ++k) {
        for (std::size_t i = 0; i < tau.cols(); ++i) tau(k, i) = arrival_time(grid, stages.policy.arrival(k, i));
    }
    write_csv(dir / "policy.csv", field_to_csv(grid, tau, pairs, "tau"));

    CsvTable pref = field_to_csv(grid, stages.preference, paths, "z");
    for (std::size_t p = 0; p < paths.size(); ++p) pref.header.push_back("F_beta[" + paths[p] + "]");
    for (std::size_t i = 0; i < pref.rows.size(); ++i) {
        for (std::size_t p = 0; p < paths.size(); ++p) pref.rows[i].push_back(stages.logit(p, i));
    }
    write_csv(dir / "preferences.csv", pref);
    write_csv(dir / "costs.csv", field_to_csv(grid, stages.costs, paths, "J"));
}

json membership_json(const Membership& m) {
    return json{{"max_edge_mass", m.max_edge_mass}, {"rho_max", m.rho_max},
                {"max_difference_quotient", m.max_quotient}, {"lipschitz_bound", m.lipschitz},
                {"min_mass", m.min_mass}, {"mass_bound_ok", m.mass_ok},
                {"lipschitz_ok", m.lipschitz_ok}, {"nonnegative_ok", m.nonnegative_ok}};
}

json diagnostics_json(const Problem& problem, const PsiStages& stages) {
    json d;
    d["k_steps"] = compute_k_steps(problem);
    d["delays"] = stages.delays;
    d["mass_quantum"] = stages.ledger.quantum;
    d["clip_count"] = stages.ledger.clip_count;
    d["max_clip"] = stages.ledger.max_clip;
    d["negative_preferences"] = stages.negative_preferences;
    const auto violation = balance_violation(stages.ledger);
    d["balance_exact"] = !violation.has_value();
    if (violation) d["balance_first_violation"] = *violation;
    if (stages.constraint) {
        json mean = json::object();
        for (std::size_t e = 0; e < problem.network.edge_count(); ++e) {
            mean[problem.network.edge(static_cast<int>(e)).id] = stages.constraint->mean_traverse[e];
        }
        d["mean_traverse_time"] = mean;
    }
    d["psi_output_membership"] = membership_json(verify_membership(problem, stages.ledger.mass));
    return d;
}

namespace {

json with_parameters(const Problem& problem, json manifest) {
    manifest["parameters"] = to_json(problem);
    return manifest;
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace

void write_solve_outputs(const std::filesystem::path& dir, const Problem& problem, const EquilibriumReport& report,
                         const json& manifest) {
    prepare_dir(dir);
    write_csv(dir / "masses.csv", field_to_csv(problem.grid, report.mass, pair_labels(problem), "rho"));
    write_stage_files(dir, problem, report.stages);

    CsvTable res;
    res.header = {"iteration", "residual"};
    for (std::size_t n = 0; n < report.residuals.size(); ++n) {
        res.rows.push_back({static_cast<double>(n), report.residuals[n]});
    }
    write_csv(dir / "residuals.csv", res);

    const json full_manifest = with_parameters(problem, manifest);
    json doc;
    doc["converged"] = report.converged;
    doc["iterations"] = report.iterations;
    doc["tolerance"] = report.tolerance;
    doc["constrained"] = report.constrained;
    doc["residuals"] = report.residuals;
    doc["residual_increases"] = report.increases;
    json diag = diagnostics_json(problem, report.stages);
    diag["membership"] = membership_json(report.membership);
    diag["total_clip_count"] = report.total_clips;
    diag["max_clip_all_iterations"] = report.max_clip;
    diag["balance_exact_all_iterations"] = !report.balance_failure.has_value();
    doc["diagnostics"] = diag;
    doc["manifest"] = full_manifest;
    write_json(dir / "report.json", doc);
    write_json(dir / "manifest.json", full_manifest);
}

void write_psi_outputs(const std::filesystem::path& dir, const Problem& problem, const Field& input,
                       const PsiStages& stages, bool constrained, const json& manifest) {
    prepare_dir(dir);
    write_csv(dir / "masses.csv", field_to_csv(problem.grid, stages.ledger.mass, pair_labels(problem), "rho"));
    write_stage_files(dir, problem, stages);
    const json full_manifest = with_parameters(problem, manifest);
    json doc;
    doc["residual"] = residual(stages.ledger.mass, input);
    doc["constrained"] = constrained;
    doc["input_membership"] = membership_json(verify_membership(problem, input));
    doc["diagnostics"] = diagnostics_json(problem, stages);
    doc["manifest"] = full_manifest;
    write_json(dir / "report.json", doc);
    write_json(dir / "manifest.json", full_manifest);
}

}  // namespace mfgnet
