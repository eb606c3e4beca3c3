#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "curve.hpp"
#include "error.hpp"
#include "model.hpp"

namespace palm {

enum class ParamId { a_max, delta, alpha, beta };

const char* param_name(ParamId id) noexcept;

/// Initial quadruple for one optimizer start. An a_max of NaN means
/// "use the data-derived default min(100, 1.05 * max observed accuracy)".
struct FitStart {
  double a_max;
  double delta;
  double alpha;
  double beta;
};

/// Fitting knobs. The a_max bounds are derived from the curve at fit time:
/// [max observed accuracy, 100].
struct FitConfig {
  double delta_min = 1e-9;
  double delta_max = 1.0 - 1e-9;
  double alpha_cap = 100.0;
  double beta_min = 1e-3;
  double beta_cap = 8.0;

  /// Empty means the default 36-start grid:
  /// delta in {0.01, 0.1, 0.3, 0.6} x alpha in {0, 1, 5} x beta in {0.5, 1, 2},
  /// with a_max = min(100, 1.05 * max observed accuracy).
  std::vector<FitStart> starts;

  int max_iterations = 200;  ///< per start
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-10;
  double residual_tolerance = 1e-12;
};

/// Per-start optimizer record, kept for diagnostics and the SSE-trace
/// monotonicity property.
struct StartDiagnostics {
  int start_index = 0;
  FitStart start{};
  bool converged = false;
  std::string termination;  ///< "gradient", "step", "residual", "max_iterations", ...
  int iterations = 0;
  double sse = 0.0;
  std::vector<double> sse_trace;  ///< SSE after each accepted step (front = start)
};

struct FitResult {
  PalmParams params{};
  double sse = 0.0;
  double rmse = 0.0;
  int iterations = 0;
  bool converged = false;
  std::set<ParamId> boundary_flags;  ///< parameters within tolerance of a bound
  int start_index = 0;               ///< which start won
  bool degenerate = false;           ///< constant-accuracy input
  std::vector<StartDiagnostics> starts;
};

/// observed accuracy minus model accuracy, in curve point order.
std::vector<double> residuals(const PalmParams& params, const LearningCurve& curve);

/// Sum of squared residuals.
double sum_squared_residuals(const PalmParams& params, const LearningCurve& curve);

/// Bounded nonlinear least squares: Levenberg-Marquardt from every start,
/// parameters mapped to unconstrained space through logistic bijections onto
/// their bounds, analytic Jacobian. Returns the converged start with the
/// lowest SSE (ties broken by lowest start index). Deterministic for a fixed
/// (curve, config).
///
/// Throws Error(too_few_points) below 4 distinct budgets and
/// Error(no_converged_start) when every start fails, with per-start
/// termination reasons in the message. A constant-accuracy curve yields a
/// flagged degenerate result instead of running the optimizer.
FitResult fit(const LearningCurve& curve, const FitConfig& config = {});

/// One prefix-fit outcome; exactly one of `result` and `error` is set.
struct PrefixFitEntry {
  std::size_t prefix_size = 0;
  std::optional<FitResult> result;
  std::optional<ErrorCode> error;
  std::string error_message;
};

/// Fits each requested prefix independently; per-entry failures are recorded
/// rather than aborting the series.
std::vector<PrefixFitEntry> fit_prefix_series(const LearningCurve& curve,
                                              const std::vector<std::size_t>& prefix_sizes,
                                              const FitConfig& config = {});

}  // namespace palm
