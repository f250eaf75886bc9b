// mfgnet command-line front end. Talks to the solver only through the C API.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mfgnet/mfgnet.h"

namespace {

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kNotConverged = 3 };

int exit_code(mfg_status s) {
    switch (s) {
        case MFG_OK: return kOk;
        case MFG_ERR_PARSE: return kParse;
        case MFG_ERR_NOT_CONVERGED: return kNotConverged;
        default: return kFailed;
    }
}

int report_error(mfg_status s) {
    std::cerr << "error: " << mfg_status_name(s) << ": " << mfg_last_error() << '\n';
    return exit_code(s);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string manifest(const std::string& command, const std::string& scenario, const Timer& timer, int status,
                     nlohmann::json extra = nlohmann::json::object()) {
    extra["command"] = command;
    extra["scenario"] = scenario;
    extra["tool_version"] = mfg_version();
    extra["duration_seconds"] = timer.seconds();
    extra["exit_status"] = status;
    return extra.dump();
}

/// Loads the scenario and applies --steps; returns nullptr after printing on failure.
mfg_problem* load(const std::string& path, int steps, int& code) {
    mfg_problem* problem = nullptr;
    mfg_status s = mfg_problem_load(path.c_str(), &problem);
    if (s == MFG_OK && steps > 0) s = mfg_problem_set_steps(problem, steps);
    if (s != MFG_OK) {
        code = report_error(s);
        mfg_problem_free(problem);
        return nullptr;
    }
    return problem;
}

int cmd_validate(const std::string& path) {
    mfg_checks* checks = nullptr;
    const mfg_status s = mfg_check_file(path.c_str(), &checks);
    if (!checks) return report_error(s);
    for (size_t i = 0; i < mfg_checks_count(checks); ++i) {
        std::cout << mfg_checks_name(checks, i) << ": " << (mfg_checks_passed(checks, i) ? "PASS" : "FAIL") << " ("
                  << mfg_checks_detail(checks, i) << ")\n";
    }
    mfg_checks_free(checks);
    if (s != MFG_OK) {
        std::cerr << "error: " << mfg_last_error() << '\n';
        return exit_code(s);
    }
    std::cout << "scenario valid\n";
    return kOk;
}

struct SolveArgs {
    std::string scenario;
    std::string out;
    double gamma = -1.0;
    double tol = -1.0;
    int max_iter = 0;
    int steps = 0;
    bool constrained = false;
};

int cmd_solve(const SolveArgs& a) {
    Timer timer;
    int code = kOk;
    mfg_problem* problem = load(a.scenario, a.steps, code);
    if (!problem) return code;
    mfg_solve_options opt;
    mfg_solve_options_init(&opt);
    opt.gamma = a.gamma;
    opt.tol = a.tol;
    opt.max_iter = a.max_iter;
    opt.constrained = a.constrained ? 1 : 0;
    mfg_report* report = nullptr;
    const mfg_status s = mfg_solve(problem, &opt, &report);
    mfg_problem_free(problem);
    if (!report) return report_error(s);

    code = exit_code(s);
    const size_t n = mfg_report_residual_count(report);
    std::cout << "iterations: " << mfg_report_iterations(report) << '\n';
    std::cout << "final residual: " << mfg_report_residual(report, n - 1) << '\n';
    std::cout << "converged: " << (mfg_report_converged(report) ? "yes" : "no") << '\n';
    if (s != MFG_OK) std::cerr << "warning: " << mfg_last_error() << '\n';

    const auto m = manifest("solve", a.scenario, timer, code, {{"constrained_flag", a.constrained}});
    const mfg_status w = mfg_report_write(report, a.out.c_str(), m.c_str());
    mfg_report_free(report);
    if (w != MFG_OK) return report_error(w);
    std::cout << "outputs written to " << a.out << '\n';
    return code;
}

int cmd_psi_once(const std::string& scenario, const std::string& mass, bool zero, const std::string& out,
                 bool constrained, int steps) {
    Timer timer;
    int code = kOk;
    mfg_problem* problem = load(scenario, steps, code);
    if (!problem) return code;
    mfg_psi* psi = nullptr;
    const mfg_status s = mfg_psi_eval(problem, zero ? nullptr : mass.c_str(), constrained ? 1 : 0, &psi);
    mfg_problem_free(problem);
    if (s != MFG_OK) return report_error(s);
    std::printf("residual: %.17g\n", mfg_psi_residual(psi));
    nlohmann::json extra{{"mass_input", zero ? std::string("zero") : mass}, {"constrained_flag", constrained}};
    const auto m = manifest("psi-once", scenario, timer, kOk, extra);
    const mfg_status w = mfg_psi_write(psi, out.c_str(), m.c_str());
    mfg_psi_free(psi);
    if (w != MFG_OK) return report_error(w);
    std::cout << "outputs written to " << out << '\n';
    return kOk;
}

int cmd_oracle(const std::string& scenario, int max_n, int steps, bool constrained) {
    int code = kOk;
    mfg_problem* problem = load(scenario, steps, code);
    if (!problem) return code;
    mfg_oracle_summary summary;
    const mfg_status s = mfg_oracle_run(problem, max_n, constrained ? 1 : 0, &summary);
    mfg_problem_free(problem);
    if (s != MFG_OK && s != MFG_ERR_MISMATCH) return report_error(s);
    std::printf("entries checked: %zu\n", summary.checked);
    std::printf("max value deviation: %.17g\n", summary.max_value_deviation);
    std::printf("policy mismatches: %zu\n", summary.policy_mismatches);
    std::printf("conservation identity: %s\n", summary.balance_ok ? "exact" : "broken");
    if (s == MFG_ERR_MISMATCH) {
        std::printf("MISMATCH %s at (%s, t=%.17g): oracle %.17g, pipeline %.17g\n", summary.quantity,
                    summary.pair_label, summary.time, summary.expected, summary.actual);
        return kFailed;
    }
    std::printf("oracle: MATCH\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field equilibrium solver for flows on acyclic networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mfg_version()));

    std::string scenario;
    auto* validate = app.add_subcommand("validate", "Check a scenario file against the model assumptions");
    validate->add_option("scenario", scenario, "Scenario JSON file")->required();

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Compute an equilibrium and export trajectories");
    solve->add_option("scenario", sa.scenario, "Scenario JSON file")->required();
    solve->add_option("--out", sa.out, "Output directory")->required();
    solve->add_option("--gamma", sa.gamma, "Damping factor in ]0,1]");
    solve->add_option("--tol", sa.tol, "Residual tolerance");
    solve->add_option("--max-iter", sa.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
    solve->add_option("--steps", sa.steps, "Override the grid step count N")->check(CLI::PositiveNumber);
    solve->add_flag("--constrained", sa.constrained, "Use mass-dependent speed limits");

    std::string mass;
    std::string out;
    bool zero = false;
    bool constrained = false;
    int steps = 0;
    auto* psi = app.add_subcommand("psi-once", "Evaluate the fixed-point map once and dump every stage");
    psi->add_option("scenario", scenario, "Scenario JSON file")->required();
    auto* mass_opt = psi->add_option("--mass", mass, "masses.csv to evaluate at");
    auto* zero_opt = psi->add_flag("--zero", zero, "Evaluate at the zero mass field");
    mass_opt->excludes(zero_opt);
    psi->add_option("--out", out, "Output directory")->required();
    psi->add_option("--steps", steps, "Override the grid step count N")->check(CLI::PositiveNumber);
    psi->add_flag("--constrained", constrained, "Use mass-dependent speed limits");

    int max_n = 16;
    auto* oracle = app.add_subcommand("oracle", "Compare value functions against exhaustive enumeration");
    oracle->add_option("scenario", scenario, "Scenario JSON file")->required();
    oracle->add_option("--max-N", max_n, "Largest grid accepted")->check(CLI::PositiveNumber);
    oracle->add_option("--steps", steps, "Override the grid step count N")->check(CLI::PositiveNumber);
    oracle->add_flag("--constrained", constrained, "Use mass-dependent speed limits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kFailed;
    }

    if (*validate) return cmd_validate(scenario);
    if (*solve) return cmd_solve(sa);
    if (*psi) {
        if (!zero && mass.empty()) {
            std::cerr << "error: psi-once needs --mass FILE or --zero\n";
            return kFailed;
        }
        return cmd_psi_once(scenario, mass, zero, out, constrained, steps);
    }
    if (*oracle) return cmd_oracle(scenario, max_n, steps, constrained);
    return kFailed;
}
