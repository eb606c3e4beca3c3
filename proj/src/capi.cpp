// Implementation of the extern-C surface in include/palm.h. Exceptions from
// the core are caught at this boundary and mapped to status codes; messages
// land in a thread-local buffer behind palm_last_error().

#include "palm.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "curve.hpp"
#include "error.hpp"
#include "fitter.hpp"
#include "format.hpp"
#include "model.hpp"
#include "params_io.hpp"
#include "synth.hpp"

struct palm_curve {
  palm::LearningCurve impl;
  std::string warnings;
};

struct palm_fit_result {
  palm::FitResult impl;
};

namespace {

thread_local std::string tls_error;
thread_local double tls_gap = std::numeric_limits<double>::quiet_NaN();

palm_status map_code(palm::ErrorCode code) {
  using palm::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return PALM_ERROR_INVALID_ARGUMENT;
    case ErrorCode::domain: return PALM_ERROR_DOMAIN;
    case ErrorCode::parse: return PALM_ERROR_PARSE;
    case ErrorCode::validation: return PALM_ERROR_VALIDATION;
    case ErrorCode::grid_mismatch: return PALM_ERROR_GRID_MISMATCH;
    case ErrorCode::range: return PALM_ERROR_RANGE;
    case ErrorCode::too_few_points: return PALM_ERROR_TOO_FEW_POINTS;
    case ErrorCode::no_converged_start: return PALM_ERROR_NO_CONVERGED_START;
    case ErrorCode::target_unreachable: return PALM_ERROR_TARGET_UNREACHABLE;
    case ErrorCode::degenerate_model: return PALM_ERROR_DEGENERATE_MODEL;
    case ErrorCode::grid_too_large: return PALM_ERROR_GRID_TOO_LARGE;
    case ErrorCode::io: return PALM_ERROR_IO;
    case ErrorCode::json: return PALM_ERROR_JSON;
  }
  return PALM_ERROR_INTERNAL;
}

// Runs fn, converting exceptions to status codes.
template <typename Fn>
palm_status guarded(Fn&& fn) {
  tls_error.clear();
  tls_gap = std::numeric_limits<double>::quiet_NaN();
  try {
    fn();
    return PALM_OK;
  } catch (const palm::Error& e) {
    tls_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    tls_error = e.what();
    return PALM_ERROR_INTERNAL;
  } catch (...) {
    tls_error = "unknown error";
    return PALM_ERROR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

palm::PalmParams from_c(const palm_params& p) {
  return {p.a_max, p.delta, p.alpha, p.beta, p.b};
}

palm_params to_c(const palm::PalmParams& p) {
  return {p.a_max, p.delta, p.alpha, p.beta, p.b};
}

bool check_ptr(const void* ptr, const char* what) {
  if (ptr) return true;
  tls_error = std::string(what) + " must not be NULL";
  return false;
}

palm::FitConfig to_config(const palm_fit_options* options) {
  palm::FitConfig config;
  if (options) {
    config.delta_min = options->delta_min;
    config.delta_max = options->delta_max;
    config.alpha_cap = options->alpha_cap;
    config.beta_min = options->beta_min;
    config.beta_cap = options->beta_cap;
    config.max_iterations = options->max_iterations;
    config.gradient_tolerance = options->gradient_tolerance;
    config.step_tolerance = options->step_tolerance;
    config.residual_tolerance = options->residual_tolerance;
  }
  return config;
}

palm::LoadOptions to_load_options(const palm_ingest_options* options) {
  palm::LoadOptions out;
  if (options) {
    out.b = options->b;
    out.fraction = options->fraction != 0;
  }
  return out;
}

palm_curve* wrap_curve(palm::LearningCurve&& curve, std::vector<std::string>&& warnings) {
  std::string joined;
  for (const std::string& w : warnings) {
    if (!joined.empty()) joined += '\n';
    joined += w;
  }
  return new palm_curve{std::move(curve), std::move(joined)};
}

}  // namespace

extern "C" {

const char* palm_version(void) { return "1.0.0"; }

const char* palm_status_name(palm_status status) {
  switch (status) {
    case PALM_OK: return "ok";
    case PALM_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case PALM_ERROR_DOMAIN: return "domain_error";
    case PALM_ERROR_PARSE: return "parse_error";
    case PALM_ERROR_VALIDATION: return "validation_error";
    case PALM_ERROR_GRID_MISMATCH: return "grid_mismatch";
    case PALM_ERROR_RANGE: return "range_error";
    case PALM_ERROR_TOO_FEW_POINTS: return "too_few_points";
    case PALM_ERROR_NO_CONVERGED_START: return "no_converged_start";
    case PALM_ERROR_TARGET_UNREACHABLE: return "target_unreachable";
    case PALM_ERROR_DEGENERATE_MODEL: return "degenerate_model";
    case PALM_ERROR_GRID_TOO_LARGE: return "grid_too_large";
    case PALM_ERROR_IO: return "io_error";
    case PALM_ERROR_JSON: return "json_error";
    case PALM_ERROR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* palm_last_error(void) { return tls_error.c_str(); }

palm_status palm_error_json(palm_status status, char** out_json) {
  if (!out_json) return PALM_ERROR_INVALID_ARGUMENT;
  std::string doc = "{\"error\":\"";
  doc += palm_status_name(status);
  doc += "\",\"message\":\"";
  doc += palm::json_escape(tls_error);
  doc += '"';
  if (status == PALM_ERROR_TARGET_UNREACHABLE && std::isfinite(tls_gap))
    doc += ",\"gap\":" + palm::format_double(tls_gap);
  doc += '}';
  *out_json = copy_string(doc);
  return PALM_OK;
}

void palm_string_free(char* str) { delete[] str; }

/* ---- model evaluation ---- */

palm_status palm_coverage_probability(double p, double s, double* out) {
  if (!check_ptr(out, "out")) return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = palm::coverage_probability(p, s); });
}

palm_status palm_expected_coverage(double delta, double budget, double* out) {
  if (!check_ptr(out, "out")) return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = palm::expected_coverage(delta, budget); });
}

palm_status palm_two_region_accuracy(double a_covered, double a_uncovered, double delta,
                                     double budget, double* out) {
  if (!check_ptr(out, "out")) return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = palm::two_region_accuracy({a_covered, a_uncovered, delta}, budget);
  });
}

palm_status palm_model_accuracy(const palm_params* params, double budget, double* out) {
  if (!check_ptr(params, "params") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = palm::palm_accuracy(from_c(*params), budget); });
}

palm_status palm_generalized_accuracy(double a_max, double delta, double alpha,
                                      double beta, double budget, double* out) {
  if (!check_ptr(out, "out")) return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = palm::generalized_accuracy({a_max, delta, alpha, beta, 1.0}, budget);
  });
}

palm_status palm_model_accuracy_small_delta(const palm_params* params, double budget,
                                            double* out) {
  if (!check_ptr(params, "params") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = palm::palm_accuracy_small_delta(from_c(*params), budget);
  });
}

palm_status palm_model_slope(const palm_params* params, double budget, double* out) {
  if (!check_ptr(params, "params") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out = palm::palm_slope(from_c(*params), budget); });
}

palm_status palm_model_gradient(const palm_params* params, double budget, double grad[4]) {
  if (!check_ptr(params, "params") || !check_ptr(grad, "grad"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const palm::ParamGradient g = palm::palm_param_gradient(from_c(*params), budget);
    grad[0] = g.d_a_max;
    grad[1] = g.d_delta;
    grad[2] = g.d_alpha;
    grad[3] = g.d_beta;
  });
}

palm_status palm_invert_budget(const palm_params* params, double target,
                               double* out_budget) {
  if (!check_ptr(params, "params") || !check_ptr(out_budget, "out_budget"))
    return PALM_ERROR_INVALID_ARGUMENT;
  const palm_status st =
      guarded([&] { *out_budget = palm::invert_budget(from_c(*params), target); });
  if (st == PALM_ERROR_TARGET_UNREACHABLE) tls_gap = target - params->a_max;
  return st;
}

/* ---- learning curves ---- */

palm_status palm_curve_parse_csv(const char* text, const palm_ingest_options* options,
                                 palm_curve** out) {
  if (!check_ptr(text, "text") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<std::string> warnings;
    palm::LearningCurve curve =
        palm::load_curve(std::string(text), to_load_options(options), &warnings);
    *out = wrap_curve(std::move(curve), std::move(warnings));
  });
}

palm_status palm_curve_load_csv(const char* path, const palm_ingest_options* options,
                                palm_curve** out) {
  if (!check_ptr(path, "path") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<std::string> warnings;
    palm::LearningCurve curve =
        palm::load_curve_file(path, to_load_options(options), &warnings);
    *out = wrap_curve(std::move(curve), std::move(warnings));
  });
}

const char* palm_curve_warnings(const palm_curve* curve) {
  return curve ? curve->warnings.c_str() : "";
}

palm_status palm_curve_aggregate(const palm_curve* curve, const char* stat,
                                 palm_curve** out) {
  if (!check_ptr(curve, "curve") || !check_ptr(stat, "stat") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    palm::AggregateStat s;
    const std::string name(stat);
    if (name == "mean")
      s = palm::AggregateStat::mean;
    else if (name == "min")
      s = palm::AggregateStat::min;
    else if (name == "max")
      s = palm::AggregateStat::max;
    else
      throw palm::Error(palm::ErrorCode::invalid_argument,
                        "stat must be one of mean|min|max, got '" + name + "'");
    *out = new palm_curve{palm::aggregate_replicates(curve->impl, s), {}};
  });
}

palm_status palm_curve_prefix(const palm_curve* curve, size_t n_points, palm_curve** out) {
  if (!check_ptr(curve, "curve") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new palm_curve{palm::prefix(curve->impl, n_points), {}};
  });
}

size_t palm_curve_point_count(const palm_curve* curve) {
  return curve ? curve->impl.size() : 0;
}

size_t palm_curve_distinct_budget_count(const palm_curve* curve) {
  return curve ? curve->impl.distinct_budgets().size() : 0;
}

double palm_curve_mean_budget(const palm_curve* curve) {
  return curve ? curve->impl.b() : 0.0;
}

palm_status palm_curve_point(const palm_curve* curve, size_t index, double* budget,
                             double* accuracy, int* replicate) {
  if (!check_ptr(curve, "curve")) return PALM_ERROR_INVALID_ARGUMENT;
  if (index >= curve->impl.size()) {
    tls_error = "point index out of range";
    return PALM_ERROR_RANGE;
  }
  const palm::CurvePoint& pt = curve->impl.points()[index];
  if (budget) *budget = pt.budget;
  if (accuracy) *accuracy = pt.accuracy;
  if (replicate) *replicate = pt.replicate;
  return PALM_OK;
}

palm_status palm_curve_to_csv(const palm_curve* curve, char** out_csv) {
  if (!check_ptr(curve, "curve") || !check_ptr(out_csv, "out_csv"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] { *out_csv = copy_string(palm::to_csv(curve->impl)); });
}

void palm_curve_free(palm_curve* curve) { delete curve; }

/* ---- fitting ---- */

void palm_fit_options_init(palm_fit_options* options) {
  if (!options) return;
  const palm::FitConfig defaults;
  options->delta_min = defaults.delta_min;
  options->delta_max = defaults.delta_max;
  options->alpha_cap = defaults.alpha_cap;
  options->beta_min = defaults.beta_min;
  options->beta_cap = defaults.beta_cap;
  options->max_iterations = defaults.max_iterations;
  options->gradient_tolerance = defaults.gradient_tolerance;
  options->step_tolerance = defaults.step_tolerance;
  options->residual_tolerance = defaults.residual_tolerance;
}

palm_status palm_fit(const palm_curve* curve, const palm_fit_options* options,
                     palm_fit_result** out) {
  if (!check_ptr(curve, "curve") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new palm_fit_result{palm::fit(curve->impl, to_config(options))};
  });
}

palm_status palm_fit_result_params(const palm_fit_result* result, palm_params* out) {
  if (!check_ptr(result, "result") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  *out = to_c(result->impl.params);
  return PALM_OK;
}

double palm_fit_result_sse(const palm_fit_result* result) {
  return result ? result->impl.sse : 0.0;
}

double palm_fit_result_rmse(const palm_fit_result* result) {
  return result ? result->impl.rmse : 0.0;
}

int palm_fit_result_iterations(const palm_fit_result* result) {
  return result ? result->impl.iterations : 0;
}

int palm_fit_result_converged(const palm_fit_result* result) {
  return result && result->impl.converged ? 1 : 0;
}

int palm_fit_result_degenerate(const palm_fit_result* result) {
  return result && result->impl.degenerate ? 1 : 0;
}

int palm_fit_result_start_index(const palm_fit_result* result) {
  return result ? result->impl.start_index : 0;
}

int palm_fit_result_boundary_flags(const palm_fit_result* result) {
  if (!result) return 0;
  int mask = 0;
  for (palm::ParamId id : result->impl.boundary_flags) {
    switch (id) {
      case palm::ParamId::a_max: mask |= PALM_BOUNDARY_A_MAX; break;
      case palm::ParamId::delta: mask |= PALM_BOUNDARY_DELTA; break;
      case palm::ParamId::alpha: mask |= PALM_BOUNDARY_ALPHA; break;
      case palm::ParamId::beta: mask |= PALM_BOUNDARY_BETA; break;
    }
  }
  return mask;
}

palm_status palm_fit_result_to_json(const palm_fit_result* result, char** out_json) {
  if (!check_ptr(result, "result") || !check_ptr(out_json, "out_json"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out_json = copy_string(palm::to_json(palm::make_document(result->impl)));
  });
}

void palm_fit_result_free(palm_fit_result* result) { delete result; }

/* ---- parameter documents ---- */

palm_status palm_params_from_json(const char* json, palm_params* out) {
  if (!check_ptr(json, "json") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = to_c(palm::params_document_from_json(json).params);
  });
}

palm_status palm_params_to_json(const palm_params* params, char** out_json) {
  if (!check_ptr(params, "params") || !check_ptr(out_json, "out_json"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    palm::validate(from_c(*params));
    *out_json = copy_string(palm::to_json(palm::make_document(from_c(*params))));
  });
}

/* ---- analysis ---- */

palm_status palm_compare_json(const palm_params* first, const palm_params* second,
                              const double* budgets, size_t n_budgets, char** out_json) {
  if (!check_ptr(first, "first") || !check_ptr(second, "second") ||
      !check_ptr(budgets, "budgets") || !check_ptr(out_json, "out_json"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const std::vector<double> grid(budgets, budgets + n_budgets);
    *out_json =
        copy_string(palm::to_json(palm::compare(from_c(*first), from_c(*second), grid)));
  });
}

palm_status palm_growth_criterion(const palm_params* first, const palm_params* second,
                                  double budget, int* out_verdict) {
  if (!check_ptr(first, "first") || !check_ptr(second, "second") ||
      !check_ptr(out_verdict, "out_verdict"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    switch (palm::growth_criterion(from_c(*first), from_c(*second), budget)) {
      case palm::Verdict::first: *out_verdict = 1; break;
      case palm::Verdict::second: *out_verdict = -1; break;
      case palm::Verdict::tie: *out_verdict = 0; break;
    }
  });
}

palm_status palm_predict_csv(const palm_params* params, const double* budgets,
                             size_t n_budgets, char** out_csv) {
  if (!check_ptr(params, "params") || !check_ptr(budgets, "budgets") ||
      !check_ptr(out_csv, "out_csv"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    const std::vector<double> grid(budgets, budgets + n_budgets);
    *out_csv = copy_string(palm::predictions_csv(from_c(*params), grid));
  });
}

palm_status palm_predict_from_prefix_json(const palm_curve* curve, size_t prefix_size,
                                          const palm_fit_options* options,
                                          char** out_json) {
  if (!check_ptr(curve, "curve") || !check_ptr(out_json, "out_json"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    *out_json = copy_string(palm::to_json(
        palm::predict_from_prefix(curve->impl, prefix_size, to_config(options))));
  });
}

palm_status palm_required_budget(const palm_params* params, double target,
                                 double* out_samples, double* out_iterations) {
  if (!check_ptr(params, "params") || !check_ptr(out_samples, "out_samples") ||
      !check_ptr(out_iterations, "out_iterations"))
    return PALM_ERROR_INVALID_ARGUMENT;
  const palm_status st = guarded([&] {
    const double samples = palm::invert_budget(from_c(*params), target);
    *out_samples = samples;
    *out_iterations = samples / params->b;
  });
  if (st == PALM_ERROR_TARGET_UNREACHABLE) tls_gap = target - params->a_max;
  return st;
}

palm_status palm_required_budget_json(const palm_params* params, double target,
                                      char** out_json) {
  if (!check_ptr(params, "params") || !check_ptr(out_json, "out_json"))
    return PALM_ERROR_INVALID_ARGUMENT;
  const palm_status st = guarded([&] {
    const double samples = palm::invert_budget(from_c(*params), target);
    *out_json =
        copy_string(palm::budget_to_json({samples, samples / params->b}));
  });
  if (st == PALM_ERROR_TARGET_UNREACHABLE) tls_gap = target - params->a_max;
  return st;
}

/* ---- synthetic curves ---- */

palm_status palm_generate(const palm_params* params, int n_iterations, double noise_sigma,
                          uint64_t seed, int replicates, palm_curve** out) {
  if (!check_ptr(params, "params") || !check_ptr(out, "out"))
    return PALM_ERROR_INVALID_ARGUMENT;
  return guarded([&] {
    palm::SynthSpec spec;
    spec.params = from_c(*params);
    spec.n_iterations = n_iterations;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    spec.replicates = replicates;
    *out = new palm_curve{palm::generate(spec), {}};
  });
}

} /* extern "C" */
