#include "fitter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "format.hpp"

namespace palm {

namespace {

constexpr int kNumParams = 4;
constexpr double kBoundaryTolerance = 1e-3;  // relative to bound width
constexpr double kLambdaInit = 1e-3;
constexpr double kLambdaUp = 8.0;
constexpr double kLambdaDown = 8.0;
constexpr double kLambdaMin = 1e-12;
constexpr double kLambdaMax = 1e14;
constexpr int kMaxInnerAttempts = 40;

struct Bound {
  double lo, hi;
  double width() const { return hi - lo; }
  bool fixed() const { return width() <= 0.0; }
};

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// theta = lo + width * sigmoid(u); the open interval (lo, hi) maps onto R.
double to_external(const Bound& b, double u) {
  if (b.fixed()) return b.lo;
  return b.lo + b.width() * sigmoid(u);
}

double dtheta_du(const Bound& b, double u) {
  if (b.fixed()) return 0.0;
  const double s = sigmoid(u);
  return b.width() * s * (1.0 - s);
}

// Inverse transform with the start nudged strictly inside the interval.
double to_internal(const Bound& b, double theta) {
  if (b.fixed()) return 0.0;
  const double margin = 1e-9 * b.width();
  const double t = std::clamp(theta, b.lo + margin, b.hi - margin);
  return std::log((t - b.lo) / (b.hi - t));
}

PalmParams make_params(const std::array<Bound, kNumParams>& bounds,
                       const std::array<double, kNumParams>& u, double b) {
  return {to_external(bounds[0], u[0]), to_external(bounds[1], u[1]),
          to_external(bounds[2], u[2]), to_external(bounds[3], u[3]), b};
}

// Model gradient with the normalized budget floored away from zero. The
// closed form is singular at B/b + alpha == 0 for beta < 1; the floor only
// engages for a budget-0 point while alpha sits at its lower bound.
ParamGradient guarded_gradient(const PalmParams& p, double budget) {
  const double x = budget / p.b + p.alpha;
  if (x >= 1e-12) return palm_param_gradient(p, budget);
  PalmParams q = p;
  q.alpha = p.alpha + (1e-12 - x);
  return palm_param_gradient(q, budget);
}

// Solves (A + lambda * D) h = g for the 4x4 SPD system via Cholesky.
// Returns false when the factorization breaks down.
bool solve_damped(const std::array<std::array<double, kNumParams>, kNumParams>& A,
                  const std::array<double, kNumParams>& D, double lambda,
                  const std::array<double, kNumParams>& g,
                  std::array<double, kNumParams>& h) {
  std::array<std::array<double, kNumParams>, kNumParams> L{};
  for (int i = 0; i < kNumParams; ++i)
    for (int j = 0; j <= i; ++j) {
      double sum = A[i][j] + (i == j ? lambda * D[i] : 0.0);
      for (int k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j) {
        if (!(sum > 0.0) || !std::isfinite(sum)) return false;
        L[i][i] = std::sqrt(sum);
      } else {
        L[i][j] = sum / L[j][j];
      }
    }
  std::array<double, kNumParams> y{};
  for (int i = 0; i < kNumParams; ++i) {
    double sum = g[i];
    for (int k = 0; k < i; ++k) sum -= L[i][k] * y[k];
    y[i] = sum / L[i][i];
  }
  for (int i = kNumParams - 1; i >= 0; --i) {
    double sum = y[i];
    for (int k = i + 1; k < kNumParams; ++k) sum -= L[k][i] * h[k];
    h[i] = sum / L[i][i];
  }
  for (double v : h)
    if (!std::isfinite(v)) return false;
  return true;
}

double curve_sse(const PalmParams& p, const LearningCurve& curve) {
  double sse = 0.0;
  for (const CurvePoint& pt : curve.points()) {
    const double r = pt.accuracy - palm_accuracy(p, pt.budget);
    sse += r * r;
  }
  return sse;
}

struct StartOutcome {
  std::array<double, kNumParams> u{};
  double sse = 0.0;
  StartDiagnostics diag;
};

StartOutcome run_start(const LearningCurve& curve, const FitConfig& config,
                       const std::array<Bound, kNumParams>& bounds, int start_index,
                       const FitStart& start) {
  StartOutcome out;
  out.diag.start_index = start_index;
  out.diag.start = start;

  std::array<double, kNumParams> u = {
      to_internal(bounds[0], start.a_max), to_internal(bounds[1], start.delta),
      to_internal(bounds[2], start.alpha), to_internal(bounds[3], start.beta)};

  const auto& points = curve.points();
  const std::size_t n = points.size();
  std::vector<double> r(n);

  auto eval_residuals = [&](const std::array<double, kNumParams>& uu, std::vector<double>& rr) {
    const PalmParams p = make_params(bounds, uu, curve.b());
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rr[i] = points[i].accuracy - palm_accuracy(p, points[i].budget);
      sse += rr[i] * rr[i];
    }
    return sse;
  };

  double sse = eval_residuals(u, r);
  out.diag.sse_trace.push_back(sse);

  double lambda = kLambdaInit;
  std::string termination = "max_iterations";
  bool converged = false;
  int iter = 0;

  for (iter = 0; iter < config.max_iterations; ++iter) {
    const PalmParams p = make_params(bounds, u, curve.b());

    // Jacobian of the residuals in internal coordinates: the model gradient
    // chained through the bound transform, negated (r = observed - model).
    std::array<double, kNumParams> scale{};
    for (int j = 0; j < kNumParams; ++j) scale[j] = dtheta_du(bounds[j], u[j]);

    std::array<std::array<double, kNumParams>, kNumParams> JtJ{};
    std::array<double, kNumParams> Jtr{};
    for (std::size_t i = 0; i < n; ++i) {
      const ParamGradient g = guarded_gradient(p, points[i].budget);
      const std::array<double, kNumParams> row = {
          -g.d_a_max * scale[0], -g.d_delta * scale[1], -g.d_alpha * scale[2],
          -g.d_beta * scale[3]};
      for (int a = 0; a < kNumParams; ++a) {
        Jtr[a] += row[a] * r[i];
        for (int c = 0; c <= a; ++c) JtJ[a][c] += row[a] * row[c];
      }
    }
    for (int a = 0; a < kNumParams; ++a)
      for (int c = a + 1; c < kNumParams; ++c) JtJ[a][c] = JtJ[c][a];

    double gnorm = 0.0;
    for (double v : Jtr) gnorm = std::max(gnorm, std::abs(v));
    if (gnorm < config.gradient_tolerance) {
      termination = "gradient";
      converged = true;
      break;
    }

    std::array<double, kNumParams> damping{};
    for (int j = 0; j < kNumParams; ++j) damping[j] = std::max(JtJ[j][j], 1e-12);

    std::array<double, kNumParams> neg_g{};
    for (int j = 0; j < kNumParams; ++j) neg_g[j] = -Jtr[j];

    bool accepted = false;
    std::array<double, kNumParams> h{};
    std::vector<double> r_try(n);
    for (int attempt = 0; attempt < kMaxInnerAttempts; ++attempt) {
      if (!solve_damped(JtJ, damping, lambda, neg_g, h)) {
        lambda *= kLambdaUp;
        if (lambda > kLambdaMax) break;
        continue;
      }
      std::array<double, kNumParams> u_try{};
      for (int j = 0; j < kNumParams; ++j) u_try[j] = u[j] + h[j];
      const double sse_try = eval_residuals(u_try, r_try);
      if (std::isfinite(sse_try) && sse_try < sse) {
        u = u_try;
        r.swap(r_try);
        sse = sse_try;
        out.diag.sse_trace.push_back(sse);
        lambda = std::max(lambda / kLambdaDown, kLambdaMin);
        accepted = true;
        break;
      }
      lambda *= kLambdaUp;
      if (lambda > kLambdaMax) break;
    }

    if (!accepted) {
      // No downhill step at any damping: either done or stuck.
      termination = "no_descent";
      break;
    }

    double hnorm = 0.0, unorm = 0.0;
    for (int j = 0; j < kNumParams; ++j) {
      hnorm += h[j] * h[j];
      unorm += u[j] * u[j];
    }
    hnorm = std::sqrt(hnorm);
    unorm = std::sqrt(unorm);
    if (hnorm < config.step_tolerance * (unorm + config.step_tolerance)) {
      termination = "step";
      converged = true;
      ++iter;
      break;
    }
    if (sse < config.residual_tolerance) {
      termination = "residual";
      converged = true;
      ++iter;
      break;
    }
  }

  out.u = u;
  out.sse = sse;
  out.diag.converged = converged;
  out.diag.termination = termination;
  out.diag.iterations = iter;
  out.diag.sse = sse;
  return out;
}

FitResult degenerate_fit(const LearningCurve& curve, const FitConfig& config) {
  const double level = curve.points().front().accuracy;
  FitResult result;
  // With delta pinned at its upper bound and a one-iteration onset the model
  // is flat at `level` to within a_max * delta_min everywhere.
  result.params = {level, config.delta_max, 1.0, 1.0, curve.b()};
  result.sse = curve_sse(result.params, curve);
  result.rmse = std::sqrt(result.sse / static_cast<double>(curve.size()));
  result.converged = true;
  result.degenerate = true;
  result.boundary_flags = {ParamId::delta};
  if (level <= 0.0 || level >= 100.0) result.boundary_flags.insert(ParamId::a_max);
  return result;
}

void check_config(const FitConfig& config) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (!(config.delta_min > 0.0) || !(config.delta_max < 1.0) ||
      !(config.delta_min <= config.delta_max))
    bad("delta bounds must satisfy 0 < delta_min <= delta_max < 1");
  if (!(config.alpha_cap > 0.0)) bad("alpha_cap must be > 0");
  if (!(config.beta_min > 0.0) || !(config.beta_min <= config.beta_cap))
    bad("beta bounds must satisfy 0 < beta_min <= beta_cap");
  if (config.max_iterations < 1) bad("max_iterations must be >= 1");
  if (!(config.gradient_tolerance > 0.0) || !(config.step_tolerance > 0.0) ||
      !(config.residual_tolerance > 0.0))
    bad("convergence tolerances must be > 0");
}

std::vector<FitStart> default_starts(double a_max_start) {
  static constexpr double kDeltas[] = {0.01, 0.1, 0.3, 0.6};
  static constexpr double kAlphas[] = {0.0, 1.0, 5.0};
  static constexpr double kBetas[] = {0.5, 1.0, 2.0};
  std::vector<FitStart> starts;
  starts.reserve(36);
  for (double d : kDeltas)
    for (double a : kAlphas)
      for (double be : kBetas) starts.push_back({a_max_start, d, a, be});
  return starts;
}

}  // namespace

const char* param_name(ParamId id) noexcept {
  switch (id) {
    case ParamId::a_max: return "a_max";
    case ParamId::delta: return "delta";
    case ParamId::alpha: return "alpha";
    case ParamId::beta: return "beta";
  }
  return "?";
}

std::vector<double> residuals(const PalmParams& params, const LearningCurve& curve) {
  std::vector<double> r;
  r.reserve(curve.size());
  for (const CurvePoint& pt : curve.points())
    r.push_back(pt.accuracy - palm_accuracy(params, pt.budget));
  return r;
}

double sum_squared_residuals(const PalmParams& params, const LearningCurve& curve) {
  return curve_sse(params, curve);
}

FitResult fit(const LearningCurve& curve, const FitConfig& config) {
  check_config(config);
  if (curve.distinct_budgets().size() < 4)
    throw Error(ErrorCode::too_few_points,
                "fitting requires at least 4 distinct budgets, curve has " +
                    std::to_string(curve.distinct_budgets().size()));

  const double max_acc = curve.max_accuracy();
  if (max_acc - curve.min_accuracy() < 1e-12) return degenerate_fit(curve, config);

  const std::array<Bound, kNumParams> bounds = {
      Bound{max_acc, 100.0},
      Bound{config.delta_min, config.delta_max},
      Bound{0.0, config.alpha_cap},
      Bound{config.beta_min, config.beta_cap}};

  const double a_max_start = std::min(100.0, 1.05 * max_acc);
  const std::vector<FitStart> starts =
      config.starts.empty() ? default_starts(a_max_start) : config.starts;

  auto inside = [](const Bound& b, double v) { return v >= b.lo && v <= b.hi; };

  FitResult result;
  bool have_winner = false;
  std::vector<std::string> failures;
  int usable = 0;

  for (std::size_t s = 0; s < starts.size(); ++s) {
    FitStart start = starts[s];
    if (std::isnan(start.a_max)) start.a_max = a_max_start;
    if (!inside(bounds[0], start.a_max) || !inside(bounds[1], start.delta) ||
        !inside(bounds[2], start.alpha) || !inside(bounds[3], start.beta)) {
      StartDiagnostics skipped;
      skipped.start_index = static_cast<int>(s);
      skipped.start = start;
      skipped.termination = "outside_bounds";
      result.starts.push_back(std::move(skipped));
      failures.push_back("start " + std::to_string(s) + ": outside bounds");
      continue;
    }
    ++usable;
    StartOutcome outcome = run_start(curve, config, bounds, static_cast<int>(s), start);
    if (outcome.diag.converged) {
      if (!have_winner || outcome.sse < result.sse) {
        result.params = make_params(bounds, outcome.u, curve.b());
        result.sse = outcome.sse;
        result.iterations = outcome.diag.iterations;
        result.start_index = static_cast<int>(s);
        have_winner = true;
      }
    } else {
      failures.push_back("start " + std::to_string(s) + ": " + outcome.diag.termination);
    }
    result.starts.push_back(std::move(outcome.diag));
  }

  if (usable == 0)
    throw Error(ErrorCode::invalid_argument, "no start lies inside the configured bounds");
  if (!have_winner) {
    std::string msg = "no start converged:";
    for (const std::string& f : failures) msg += " [" + f + "]";
    throw Error(ErrorCode::no_converged_start, msg);
  }

  result.converged = true;
  result.rmse = std::sqrt(result.sse / static_cast<double>(curve.size()));

  const std::array<std::pair<ParamId, double>, kNumParams> values = {
      std::pair{ParamId::a_max, result.params.a_max}, {ParamId::delta, result.params.delta},
      {ParamId::alpha, result.params.alpha}, {ParamId::beta, result.params.beta}};
  for (int j = 0; j < kNumParams; ++j) {
    const Bound& b = bounds[j];
    const auto& [id, v] = values[j];
    if (b.fixed() || v - b.lo <= kBoundaryTolerance * b.width() ||
        b.hi - v <= kBoundaryTolerance * b.width())
      result.boundary_flags.insert(id);
  }
  return result;
}

std::vector<PrefixFitEntry> fit_prefix_series(const LearningCurve& curve,
                                              const std::vector<std::size_t>& prefix_sizes,
                                              const FitConfig& config) {
  std::vector<PrefixFitEntry> out;
  out.reserve(prefix_sizes.size());
  for (std::size_t size : prefix_sizes) {
    PrefixFitEntry entry;
    entry.prefix_size = size;
    try {
      entry.result = fit(prefix(curve, size), config);
    } catch (const Error& e) {
      entry.error = e.code();
      entry.error_message = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace palm
