/* palm.h - C interface to the palm learning-curve library.
 *
 * Models active-learning accuracy trajectories as
 *
 *     A(B) = a_max * (1 - (1 - delta)^((B/b + alpha)^beta))
 *
 * where B is the cumulative annotation budget (labeled samples), b the mean
 * budget per iteration, and accuracies are percents in [0, 100]. The library
 * evaluates the model and its derivatives, fits it to observed curves by
 * bounded Levenberg-Marquardt, compares fitted strategies, inverts the model
 * for budget planning, and generates synthetic curves.
 *
 * Conventions:
 *   - Every fallible function returns a palm_status; PALM_OK is 0.
 *   - On failure, palm_last_error() describes the problem (thread-local).
 *   - Objects returned through palm_curve** / palm_fit_result** are owned by
 *     the caller and released with the matching *_free function.
 *   - Strings returned through char** are NUL-terminated, owned by the
 *     caller, and released with palm_string_free.
 *   - All functions are thread-safe; handles are immutable once created.
 */

#ifndef PALM_H
#define PALM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef PALM_API
#define PALM_API
#endif

typedef enum palm_status {
  PALM_OK = 0,
  PALM_ERROR_INVALID_ARGUMENT,
  PALM_ERROR_DOMAIN,
  PALM_ERROR_PARSE,
  PALM_ERROR_VALIDATION,
  PALM_ERROR_GRID_MISMATCH,
  PALM_ERROR_RANGE,
  PALM_ERROR_TOO_FEW_POINTS,
  PALM_ERROR_NO_CONVERGED_START,
  PALM_ERROR_TARGET_UNREACHABLE,
  PALM_ERROR_DEGENERATE_MODEL,
  PALM_ERROR_GRID_TOO_LARGE,
  PALM_ERROR_IO,
  PALM_ERROR_JSON,
  PALM_ERROR_INTERNAL
} palm_status;

/* Model parameters. */
typedef struct palm_params {
  double a_max; /* accuracy ceiling, percent in [0, 100] */
  double delta; /* coverage per labeled sample, in [0, 1] */
  double alpha; /* learning-onset shift, iterations */
  double beta;  /* growth-scaling exponent, > 0 */
  double b;     /* mean labeled samples per iteration, > 0 */
} palm_params;

/* Opaque handles. */
typedef struct palm_curve palm_curve;
typedef struct palm_fit_result palm_fit_result;

PALM_API const char* palm_version(void);

/* Stable snake_case name of a status ("too_few_points", ...). */
PALM_API const char* palm_status_name(palm_status status);

/* Message for the most recent failure on this thread; empty string if none. */
PALM_API const char* palm_last_error(void);

/* {"error": <status name>, "message": <last error>} as a JSON document.
 * target-unreachable errors additionally carry a numeric "gap" field. */
PALM_API palm_status palm_error_json(palm_status status, char** out_json);

PALM_API void palm_string_free(char* str);

/* ---- model evaluation -------------------------------------------------- */

/* 1 - (1-p)^s: probability that a point is covered by at least one of s
 * independent objects. s may be non-integer. */
PALM_API palm_status palm_coverage_probability(double p, double s, double* out);

/* Expected covered fraction after `budget` samples of coverage delta. */
PALM_API palm_status palm_expected_coverage(double delta, double budget, double* out);

/* a_covered * (1 - (1-delta)^B) + a_uncovered * (1-delta)^B. */
PALM_API palm_status palm_two_region_accuracy(double a_covered, double a_uncovered,
                                              double delta, double budget, double* out);

PALM_API palm_status palm_model_accuracy(const palm_params* params, double budget,
                                         double* out);

/* Un-normalized form: b is forced to 1. */
PALM_API palm_status palm_generalized_accuracy(double a_max, double delta, double alpha,
                                               double beta, double budget, double* out);

/* Small-delta exponential approximation of the model. */
PALM_API palm_status palm_model_accuracy_small_delta(const palm_params* params,
                                                     double budget, double* out);

/* dA/dB at the given budget. */
PALM_API palm_status palm_model_slope(const palm_params* params, double budget,
                                      double* out);

/* Gradient over (a_max, delta, alpha, beta), written to grad[0..3]. */
PALM_API palm_status palm_model_gradient(const palm_params* params, double budget,
                                         double grad[4]);

/* Budget at which the model reaches `target` percent (clamped below at 0). */
PALM_API palm_status palm_invert_budget(const palm_params* params, double target,
                                        double* out_budget);

/* ---- learning curves ---------------------------------------------------- */

typedef struct palm_ingest_options {
  double b;     /* mean budget per iteration; <= 0 infers it from the data */
  int fraction; /* nonzero: accuracies arrive in [0,1], scaled by 100 */
} palm_ingest_options;

/* CSV format: header with required columns `budget`,`accuracy` and optional
 * `rep`; '#'-prefixed comment lines skipped; decimal point only. */
PALM_API palm_status palm_curve_parse_csv(const char* text,
                                          const palm_ingest_options* options,
                                          palm_curve** out);
PALM_API palm_status palm_curve_load_csv(const char* path,
                                         const palm_ingest_options* options,
                                         palm_curve** out);

/* Ingest warnings (one per line), or an empty string. Owned by the curve. */
PALM_API const char* palm_curve_warnings(const palm_curve* curve);

/* stat is "mean", "min" or "max". Replicates must share a budget grid. */
PALM_API palm_status palm_curve_aggregate(const palm_curve* curve, const char* stat,
                                          palm_curve** out);

/* First n_points distinct budgets, b and metadata preserved. */
PALM_API palm_status palm_curve_prefix(const palm_curve* curve, size_t n_points,
                                       palm_curve** out);

PALM_API size_t palm_curve_point_count(const palm_curve* curve);
PALM_API size_t palm_curve_distinct_budget_count(const palm_curve* curve);
PALM_API double palm_curve_mean_budget(const palm_curve* curve);
PALM_API palm_status palm_curve_point(const palm_curve* curve, size_t index,
                                      double* budget, double* accuracy, int* replicate);

/* Canonical CSV serialization; round-trips bit-identically. */
PALM_API palm_status palm_curve_to_csv(const palm_curve* curve, char** out_csv);

PALM_API void palm_curve_free(palm_curve* curve);

/* ---- fitting ------------------------------------------------------------ */

typedef struct palm_fit_options {
  double delta_min;          /* default 1e-9 */
  double delta_max;          /* default 1 - 1e-9 */
  double alpha_cap;          /* default 100 */
  double beta_min;           /* default 1e-3 */
  double beta_cap;           /* default 8 */
  int max_iterations;        /* default 200, per start */
  double gradient_tolerance; /* default 1e-8 */
  double step_tolerance;     /* default 1e-10 */
  double residual_tolerance; /* default 1e-12 */
} palm_fit_options;

/* Fills in the documented defaults. */
PALM_API void palm_fit_options_init(palm_fit_options* options);

/* Multi-start bounded Levenberg-Marquardt. options may be NULL for defaults.
 * Requires at least 4 distinct budgets. Constant-accuracy curves produce a
 * degenerate-flagged result rather than an error. */
PALM_API palm_status palm_fit(const palm_curve* curve, const palm_fit_options* options,
                              palm_fit_result** out);

enum {
  PALM_BOUNDARY_A_MAX = 1,
  PALM_BOUNDARY_DELTA = 2,
  PALM_BOUNDARY_ALPHA = 4,
  PALM_BOUNDARY_BETA = 8
};

PALM_API palm_status palm_fit_result_params(const palm_fit_result* result,
                                            palm_params* out);
PALM_API double palm_fit_result_sse(const palm_fit_result* result);
PALM_API double palm_fit_result_rmse(const palm_fit_result* result);
PALM_API int palm_fit_result_iterations(const palm_fit_result* result);
PALM_API int palm_fit_result_converged(const palm_fit_result* result);
PALM_API int palm_fit_result_degenerate(const palm_fit_result* result);
PALM_API int palm_fit_result_start_index(const palm_fit_result* result);
/* Bitmask of PALM_BOUNDARY_* flags. */
PALM_API int palm_fit_result_boundary_flags(const palm_fit_result* result);

/* The "palm/1" parameter document for this result. */
PALM_API palm_status palm_fit_result_to_json(const palm_fit_result* result,
                                             char** out_json);

PALM_API void palm_fit_result_free(palm_fit_result* result);

/* ---- parameter documents ------------------------------------------------ */

/* Parses a "palm/1" JSON document (as written by palm_fit_result_to_json or
 * palm_params_to_json) into the five model parameters. */
PALM_API palm_status palm_params_from_json(const char* json, palm_params* out);

/* Minimal "palm/1" document for bare parameters. */
PALM_API palm_status palm_params_to_json(const palm_params* params, char** out_json);

/* ---- analysis ----------------------------------------------------------- */

/* Comparison report over a strictly ascending budget grid: per-budget winner,
 * crossover budgets, asymptotic winner, slope winner, and a descriptive
 * per-parameter breakdown. */
PALM_API palm_status palm_compare_json(const palm_params* first,
                                       const palm_params* second, const double* budgets,
                                       size_t n_budgets, char** out_json);

/* Which model improves faster at `budget`: +1 first, -1 second, 0 tie. */
PALM_API palm_status palm_growth_criterion(const palm_params* first,
                                           const palm_params* second, double budget,
                                           int* out_verdict);

/* Model evaluated at each budget, as canonical curve CSV. */
PALM_API palm_status palm_predict_csv(const palm_params* params, const double* budgets,
                                      size_t n_budgets, char** out_csv);

/* Fit on the first prefix_size budgets, evaluate on the held-out remainder;
 * returns a JSON report with the fitted document and error summaries. */
PALM_API palm_status palm_predict_from_prefix_json(const palm_curve* curve,
                                                   size_t prefix_size,
                                                   const palm_fit_options* options,
                                                   char** out_json);

/* Budget needed to reach `target`, in samples and in iterations (B/b). */
PALM_API palm_status palm_required_budget(const palm_params* params, double target,
                                          double* out_samples, double* out_iterations);

/* Same, as {"budget_samples": ..., "budget_iterations": ...}. */
PALM_API palm_status palm_required_budget_json(const palm_params* params, double target,
                                               char** out_json);

/* ---- synthetic curves --------------------------------------------------- */

/* Budgets k*b for k = 1..n_iterations; accuracies are model values plus
 * seeded Gaussian noise, clamped to [0, 100]. Deterministic for a seed. */
PALM_API palm_status palm_generate(const palm_params* params, int n_iterations,
                                   double noise_sigma, uint64_t seed, int replicates,
                                   palm_curve** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PALM_H */
