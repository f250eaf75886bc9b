#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "mfgnet/equilibrium.hpp"
#include "mfgnet/scenario.hpp"

namespace mfgnet {

/// Shortest round-trip text for a double; infinities print as "inf".
std::string format_number(double x);
double parse_number(const std::string& token);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& file);
void write_csv(const std::filesystem::path& file, const CsvTable& table);

/// Column-per-row table with a leading time column: header "t,<prefix>[label]...".
CsvTable field_to_csv(const TimeGrid& grid, const Field& field, const std::vector<std::string>& labels,
                      const std::string& prefix);

std::vector<std::string> pair_labels(const Problem& problem);
std::vector<std::string> path_labels(const Problem& problem);

/// Loads a masses.csv; checks labels, row count and time column. Throws Error{ShapeMismatch} or Error{Io}.
Field read_mass_csv(const Problem& problem, const std::filesystem::path& file);

/// Writes flows, values, policy, preferences and costs for one psi evaluation.
void write_stage_files(const std::filesystem::path& dir, const Problem& problem, const PsiStages& stages);

nlohmann::json diagnostics_json(const Problem& problem, const PsiStages& stages);
nlohmann::json membership_json(const Membership& m);

/// masses.csv (rho*), stage files of psi(rho*), residuals.csv, report.json and manifest.json.
void write_solve_outputs(const std::filesystem::path& dir, const Problem& problem, const EquilibriumReport& report,
                         const nlohmann::json& manifest);

/// masses.csv (psi(rho)), stage files, report.json with the residual, manifest.json.
void write_psi_outputs(const std::filesystem::path& dir, const Problem& problem, const Field& input,
                       const PsiStages& stages, bool constrained, const nlohmann::json& manifest);

}  // namespace mfgnet
