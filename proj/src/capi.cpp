#include "mfgnet/mfgnet.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "mfgnet/equilibrium.hpp"
#include "mfgnet/errors.hpp"
#include "mfgnet/io.hpp"
#include "mfgnet/scenario.hpp"
#include "mfgnet/verify/oracle.hpp"

#ifndef MFGNET_VERSION
#define MFGNET_VERSION "0.0.0"
#endif

struct mfg_problem {
    mfgnet::Problem problem;
};

struct mfg_checks {
    mfgnet::ValidationReport report;
};

struct mfg_report {
    mfgnet::Problem problem;
    mfgnet::EquilibriumReport report;
};

struct mfg_psi {
    mfgnet::Problem problem;
    mfgnet::Field input;
    mfgnet::PsiStages stages;
    bool constrained = false;
};

namespace {

thread_local std::string last_error;

mfg_status status_of(mfgnet::ErrorCode code) {
    using mfgnet::ErrorCode;
    switch (code) {
        case ErrorCode::Parse: return MFG_ERR_PARSE;
        case ErrorCode::Validation: return MFG_ERR_VALIDATION;
        case ErrorCode::CycleDetected:
        case ErrorCode::Unreachable:
        case ErrorCode::BadEdge:
        case ErrorCode::PathLimit:
        case ErrorCode::EdgeNotOnPath: return MFG_ERR_NETWORK;
        case ErrorCode::ShapeMismatch: return MFG_ERR_SHAPE;
        case ErrorCode::Io: return MFG_ERR_IO;
        case ErrorCode::OutOfRange: return MFG_ERR_INVALID_ARGUMENT;
        case ErrorCode::MassBoundExceeded: return MFG_ERR_MASS_BOUND;
        case ErrorCode::SimplexViolation:
        case ErrorCode::DegenerateSimplex: return MFG_ERR_SIMPLEX;
    }
    return MFG_ERR_INTERNAL;
}

mfg_status fail(mfg_status status, const std::string& message) {
    last_error = message;
    return status;
}

/// Runs `body`, translating exceptions into status codes.
template <typename Fn>
mfg_status guarded(Fn&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const mfgnet::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(MFG_ERR_PARSE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MFG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MFG_ERR_INTERNAL, e.what());
    }
}

char* duplicate(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json manifest_from(const char* manifest_json) {
    if (!manifest_json || !*manifest_json) return nlohmann::json::object();
    auto doc = nlohmann::json::parse(manifest_json);
    if (!doc.is_object()) throw mfgnet::Error(mfgnet::ErrorCode::Parse, "manifest must be a JSON object");
    return doc;
}

void copy_text(char* dst, std::size_t cap, const std::string& src) {
    std::strncpy(dst, src.c_str(), cap - 1);
    dst[cap - 1] = '\0';
}

}  // namespace

extern "C" {

const char* mfg_version(void) { return MFGNET_VERSION; }

const char* mfg_status_name(mfg_status status) {
    switch (status) {
        case MFG_OK: return "ok";
        case MFG_ERR_PARSE: return "parse error";
        case MFG_ERR_VALIDATION: return "validation error";
        case MFG_ERR_NETWORK: return "network error";
        case MFG_ERR_SHAPE: return "shape mismatch";
        case MFG_ERR_IO: return "i/o error";
        case MFG_ERR_NOT_CONVERGED: return "not converged";
        case MFG_ERR_MISMATCH: return "oracle mismatch";
        case MFG_ERR_INVALID_ARGUMENT: return "invalid argument";
        case MFG_ERR_MASS_BOUND: return "mass bound exceeded";
        case MFG_ERR_SIMPLEX: return "simplex violation";
        case MFG_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mfg_last_error(void) { return last_error.c_str(); }

void mfg_string_free(char* s) { delete[] s; }

mfg_status mfg_check_file(const char* path, mfg_checks** out) {
    if (!path || !out) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto checks = std::make_unique<mfg_checks>();
        checks->report = mfgnet::check_scenario_file(path);
        const bool ok = checks->report.ok();
        if (!ok) last_error = checks->report.first_failure();
        *out = checks.release();
        return ok ? MFG_OK : MFG_ERR_VALIDATION;
    });
}

size_t mfg_checks_count(const mfg_checks* checks) { return checks ? checks->report.checks.size() : 0; }

int mfg_checks_passed(const mfg_checks* checks, size_t index) {
    if (!checks || index >= checks->report.checks.size()) return 0;
    return checks->report.checks[index].passed ? 1 : 0;
}

const char* mfg_checks_name(const mfg_checks* checks, size_t index) {
    if (!checks || index >= checks->report.checks.size()) return "";
    return checks->report.checks[index].name.c_str();
}

const char* mfg_checks_detail(const mfg_checks* checks, size_t index) {
    if (!checks || index >= checks->report.checks.size()) return "";
    return checks->report.checks[index].detail.c_str();
}

void mfg_checks_free(mfg_checks* checks) { delete checks; }

mfg_status mfg_problem_load(const char* path, mfg_problem** out) {
    if (!path || !out) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new mfg_problem{mfgnet::load_scenario(std::filesystem::path(path))};
        return MFG_OK;
    });
}

void mfg_problem_free(mfg_problem* problem) { delete problem; }

mfg_status mfg_problem_set_steps(mfg_problem* problem, int steps) {
    if (!problem) return fail(MFG_ERR_INVALID_ARGUMENT, "null problem");
    return guarded([&] {
        problem->problem = mfgnet::with_steps(problem->problem, steps);
        return MFG_OK;
    });
}

int mfg_problem_steps(const mfg_problem* problem) { return problem ? problem->problem.grid.steps() : 0; }

size_t mfg_problem_path_count(const mfg_problem* problem) {
    return problem ? problem->problem.paths.path_count() : 0;
}

size_t mfg_problem_pair_count(const mfg_problem* problem) {
    return problem ? problem->problem.paths.pair_count() : 0;
}

mfg_status mfg_problem_to_json(const mfg_problem* problem, char** out) {
    if (!problem || !out) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = duplicate(mfgnet::to_json(problem->problem).dump(2));
        return MFG_OK;
    });
}

void mfg_solve_options_init(mfg_solve_options* options) {
    if (!options) return;
    options->gamma = -1.0;
    options->tol = -1.0;
    options->max_iter = 0;
    options->constrained = 0;
}

mfg_status mfg_solve(const mfg_problem* problem, const mfg_solve_options* options, mfg_report** out) {
    if (!problem || !out) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        mfgnet::Problem p = problem->problem;
        bool constrained = p.scenario.constrained.enabled;
        if (options) {
            auto& s = p.scenario.solver;
            if (options->gamma >= 0.0) {
                if (!(options->gamma > 0.0 && options->gamma <= 1.0)) {
                    return fail(MFG_ERR_INVALID_ARGUMENT, "gamma must lie in ]0, 1]");
                }
                s.gamma = options->gamma;
            }
            if (options->tol >= 0.0) {
                if (!(options->tol > 0.0)) return fail(MFG_ERR_INVALID_ARGUMENT, "tol must be positive");
                s.tol = options->tol;
            }
            if (options->max_iter < 0) return fail(MFG_ERR_INVALID_ARGUMENT, "max_iter must be positive");
            if (options->max_iter > 0) s.max_iter = options->max_iter;
            constrained = constrained || options->constrained != 0;
        }
        auto result = std::make_unique<mfg_report>(mfg_report{std::move(p), {}});
        result->report = mfgnet::solve(result->problem, constrained);
        const bool converged = result->report.converged;
        *out = result.release();
        if (!converged) {
            return fail(MFG_ERR_NOT_CONVERGED, "no convergence after " + std::to_string((*out)->report.iterations) +
                                                   " iterations (last residual " +
                                                   mfgnet::format_number((*out)->report.residuals.back()) + ")");
        }
        return MFG_OK;
    });
}

int mfg_report_converged(const mfg_report* report) { return report && report->report.converged ? 1 : 0; }

int mfg_report_iterations(const mfg_report* report) { return report ? report->report.iterations : 0; }

size_t mfg_report_residual_count(const mfg_report* report) { return report ? report->report.residuals.size() : 0; }

double mfg_report_residual(const mfg_report* report, size_t n) {
    if (!report || n >= report->report.residuals.size()) return -1.0;
    return report->report.residuals[n];
}

mfg_status mfg_report_write(const mfg_report* report, const char* dir, const char* manifest_json) {
    if (!report || !dir) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        mfgnet::write_solve_outputs(dir, report->problem, report->report, manifest_from(manifest_json));
        return MFG_OK;
    });
}

void mfg_report_free(mfg_report* report) { delete report; }

mfg_status mfg_psi_eval(const mfg_problem* problem, const char* mass_csv, int constrained, mfg_psi** out) {
    if (!problem || !out) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto psi = std::make_unique<mfg_psi>();
        psi->problem = problem->problem;
        psi->constrained = constrained != 0 || psi->problem.scenario.constrained.enabled;
        if (mass_csv) {
            psi->input = mfgnet::read_mass_csv(psi->problem, mass_csv);
        } else {
            psi->input = mfgnet::Field(psi->problem.paths.pair_count(), psi->problem.grid.size());
        }
        psi->stages = mfgnet::apply_psi(psi->problem, psi->input, psi->constrained);
        *out = psi.release();
        return MFG_OK;
    });
}

double mfg_psi_residual(const mfg_psi* psi) {
    return psi ? mfgnet::residual(psi->stages.ledger.mass, psi->input) : -1.0;
}

mfg_status mfg_psi_write(const mfg_psi* psi, const char* dir, const char* manifest_json) {
    if (!psi || !dir) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        mfgnet::write_psi_outputs(dir, psi->problem, psi->input, psi->stages, psi->constrained,
                                  manifest_from(manifest_json));
        return MFG_OK;
    });
}

void mfg_psi_free(mfg_psi* psi) { delete psi; }

mfg_status mfg_oracle_run(const mfg_problem* problem, int max_steps, int constrained, mfg_oracle_summary* out) {
    if (!problem || !out) return fail(MFG_ERR_INVALID_ARGUMENT, "null argument");
    std::memset(out, 0, sizeof *out);
    return guarded([&] {
        const auto& p = problem->problem;
        const bool use_constraint = constrained != 0 || p.scenario.constrained.enabled;
        if (p.grid.steps() > max_steps) {
            return fail(MFG_ERR_VALIDATION, "oracle refuses N=" + std::to_string(p.grid.steps()) + " (--max-N " +
                                                std::to_string(max_steps) + ")");
        }
        const mfgnet::Field zero(p.paths.pair_count(), p.grid.size());
        const auto equilibrium = mfgnet::solve(p, use_constraint);
        out->balance_ok = 1;
        out->matched = 1;
        for (const mfgnet::Field* mass : {&zero, &equilibrium.mass}) {
            const auto r = mfgnet::verify::run_oracle(p, *mass, use_constraint, max_steps);
            out->max_value_deviation = std::max(out->max_value_deviation, r.max_value_deviation);
            out->policy_mismatches += r.policy_mismatches;
            out->checked += r.checked;
            if (!r.balance_ok) out->balance_ok = 0;
            if (r.first && out->matched) {
                out->matched = 0;
                copy_text(out->quantity, sizeof out->quantity, r.first->quantity);
                copy_text(out->pair_label, sizeof out->pair_label,
                          r.first->quantity == "balance" ? std::string("all") : p.pair_label(r.first->pair));
                out->time = p.grid.t(r.first->node);
                out->expected = r.first->expected;
                out->actual = r.first->actual;
            }
        }
        if (!out->matched) {
            return fail(MFG_ERR_MISMATCH, std::string("oracle mismatch in ") + out->quantity + " at (" +
                                              out->pair_label + ", t=" + mfgnet::format_number(out->time) + ")");
        }
        return MFG_OK;
    });
}

}  // extern "C"
