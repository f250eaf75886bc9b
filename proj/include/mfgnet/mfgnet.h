/* C interface to the mfgnet solver. All handles are opaque; every function
 * that can fail returns an mfg_status and leaves a message for mfg_last_error(). */
#ifndef MFGNET_MFGNET_H
#define MFGNET_MFGNET_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MFGNET_BUILDING_LIBRARY)
#    define MFG_API __declspec(dllexport)
#  else
#    define MFG_API __declspec(dllimport)
#  endif
#else
#  define MFG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfg_status {
    MFG_OK = 0,
    MFG_ERR_PARSE = 1,
    MFG_ERR_VALIDATION = 2,
    MFG_ERR_NETWORK = 3,        /* cycle, unreachable vertex, bad edge, path limit */
    MFG_ERR_SHAPE = 4,
    MFG_ERR_IO = 5,
    MFG_ERR_NOT_CONVERGED = 6,
    MFG_ERR_MISMATCH = 7,       /* oracle disagreement */
    MFG_ERR_INVALID_ARGUMENT = 8,
    MFG_ERR_MASS_BOUND = 9,
    MFG_ERR_SIMPLEX = 10,
    MFG_ERR_INTERNAL = 11
} mfg_status;

typedef struct mfg_problem mfg_problem;
typedef struct mfg_checks mfg_checks;
typedef struct mfg_report mfg_report;
typedef struct mfg_psi mfg_psi;

MFG_API const char* mfg_version(void);
MFG_API const char* mfg_status_name(mfg_status status);
/* Message of the last failure on the calling thread ("" if none). */
MFG_API const char* mfg_last_error(void);
/* Frees strings returned through char** out-parameters. */
MFG_API void mfg_string_free(char* s);

/* Scenario checks, one entry per named assumption. Parse errors fail the call. */
MFG_API mfg_status mfg_check_file(const char* path, mfg_checks** out);
MFG_API size_t mfg_checks_count(const mfg_checks* checks);
MFG_API int mfg_checks_passed(const mfg_checks* checks, size_t index);
MFG_API const char* mfg_checks_name(const mfg_checks* checks, size_t index);
MFG_API const char* mfg_checks_detail(const mfg_checks* checks, size_t index);
MFG_API void mfg_checks_free(mfg_checks* checks);

MFG_API mfg_status mfg_problem_load(const char* path, mfg_problem** out);
MFG_API void mfg_problem_free(mfg_problem* problem);
/* Regrid in place (lambda is resampled). */
MFG_API mfg_status mfg_problem_set_steps(mfg_problem* problem, int steps);
MFG_API int mfg_problem_steps(const mfg_problem* problem);
MFG_API size_t mfg_problem_path_count(const mfg_problem* problem);
MFG_API size_t mfg_problem_pair_count(const mfg_problem* problem);
/* Resolved scenario as JSON; free with mfg_string_free. */
MFG_API mfg_status mfg_problem_to_json(const mfg_problem* problem, char** out);

/* Negative numbers (or 0 for max_iter) keep the scenario's own settings. */
typedef struct mfg_solve_options {
    double gamma;
    double tol;
    int max_iter;
    int constrained;   /* nonzero: also when the scenario leaves it disabled */
} mfg_solve_options;

MFG_API void mfg_solve_options_init(mfg_solve_options* options);

/* Runs the damped fixed-point iteration. A report is produced whenever the
 * iteration ran; MFG_ERR_NOT_CONVERGED comes with a valid *out. */
MFG_API mfg_status mfg_solve(const mfg_problem* problem, const mfg_solve_options* options, mfg_report** out);
MFG_API int mfg_report_converged(const mfg_report* report);
MFG_API int mfg_report_iterations(const mfg_report* report);
MFG_API size_t mfg_report_residual_count(const mfg_report* report);
MFG_API double mfg_report_residual(const mfg_report* report, size_t n);
/* Writes CSV trajectories, report.json and manifest.json. `manifest_json` is a
 * JSON object merged into the manifest (may be NULL). */
MFG_API mfg_status mfg_report_write(const mfg_report* report, const char* dir, const char* manifest_json);
MFG_API void mfg_report_free(mfg_report* report);

/* One evaluation of psi at the masses in `mass_csv` (NULL: zero field). */
MFG_API mfg_status mfg_psi_eval(const mfg_problem* problem, const char* mass_csv, int constrained, mfg_psi** out);
MFG_API double mfg_psi_residual(const mfg_psi* psi);
MFG_API mfg_status mfg_psi_write(const mfg_psi* psi, const char* dir, const char* manifest_json);
MFG_API void mfg_psi_free(mfg_psi* psi);

typedef struct mfg_oracle_summary {
    double max_value_deviation;
    size_t policy_mismatches;
    size_t checked;
    int balance_ok;
    int matched;                /* nonzero iff values, policy and balance all agree */
    char quantity[16];          /* first mismatch: "value", "policy" or "balance" */
    char pair_label[64];
    double time;
    double expected;
    double actual;
} mfg_oracle_summary;

/* Enumeration oracle at the zero mass field and at the solver's equilibrium.
 * Returns MFG_ERR_VALIDATION when N > max_steps, MFG_ERR_MISMATCH on disagreement. */
MFG_API mfg_status mfg_oracle_run(const mfg_problem* problem, int max_steps, int constrained,
                                  mfg_oracle_summary* out);

#ifdef __cplusplus
}
#endif

#endif
