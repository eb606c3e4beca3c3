#include "model.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "format.hpp"

namespace palm {

namespace {

[[noreturn]] void fail_domain(const std::string& msg) { throw Error(ErrorCode::domain, msg); }

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) fail_domain(std::string(name) + " must be finite");
}

// (B/b + alpha), checked: the effective normalized budget the power acts on.
double normalized_budget(const PalmParams& p, double budget) {
  if (!std::isfinite(budget) || budget < 0.0)
    fail_domain("budget must be finite and >= 0, got " + format_double(budget));
  const double x = budget / p.b + p.alpha;
  if (x < 0.0)
    fail_domain("budget/b + alpha must be >= 0, got " + format_double(x));
  return x;
}

}  // namespace

void validate(const PalmParams& p) {
  require_finite(p.a_max, "a_max");
  require_finite(p.delta, "delta");
  require_finite(p.alpha, "alpha");
  require_finite(p.beta, "beta");
  require_finite(p.b, "b");
  if (p.a_max < 0.0 || p.a_max > 100.0)
    fail_domain("a_max must be in [0, 100], got " + format_double(p.a_max));
  if (p.delta < 0.0 || p.delta > 1.0)
    fail_domain("delta must be in [0, 1], got " + format_double(p.delta));
  if (p.beta <= 0.0) fail_domain("beta must be > 0, got " + format_double(p.beta));
  if (p.b <= 0.0) fail_domain("b must be > 0, got " + format_double(p.b));
}

void validate(const TwoRegionParams& p) {
  require_finite(p.a_covered, "a_covered");
  require_finite(p.a_uncovered, "a_uncovered");
  require_finite(p.delta, "delta");
  if (p.a_covered < 0.0 || p.a_covered > 100.0)
    fail_domain("a_covered must be in [0, 100]");
  if (p.a_uncovered < 0.0 || p.a_uncovered > 100.0)
    fail_domain("a_uncovered must be in [0, 100]");
  if (p.delta < 0.0 || p.delta > 1.0) fail_domain("delta must be in [0, 1]");
}

double coverage_probability(double p, double s) {
  require_finite(p, "p");
  require_finite(s, "s");
  if (p < 0.0 || p > 1.0) fail_domain("p must be in [0, 1], got " + format_double(p));
  if (s < 0.0) fail_domain("s must be >= 0, got " + format_double(s));
  if (s == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  // 1 - (1-p)^s, evaluated as -expm1(s * log1p(-p)) so that small p and
  // large s do not lose precision.
  return -std::expm1(s * std::log1p(-p));
}

double expected_coverage(double delta, double budget) {
  return coverage_probability(delta, budget);
}

double two_region_accuracy(const TwoRegionParams& p, double budget) {
  validate(p);
  if (!std::isfinite(budget) || budget < 0.0)
    fail_domain("budget must be finite and >= 0");
  const double covered = coverage_probability(p.delta, budget);
  return p.a_uncovered + (p.a_covered - p.a_uncovered) * covered;
}

double palm_accuracy(const PalmParams& p, double budget) {
  validate(p);
  const double x = normalized_budget(p, budget);
  if (p.delta == 0.0) return 0.0;
  const double t = std::pow(x, p.beta);  // pow(0, beta>0) == 0 by definition
  if (p.delta == 1.0) return t > 0.0 ? p.a_max : 0.0;
  return p.a_max * -std::expm1(t * std::log1p(-p.delta));
}

double generalized_accuracy(const PalmParams& p, double budget) {
  PalmParams q = p;
  q.b = 1.0;
  return palm_accuracy(q, budget);
}

double palm_accuracy_small_delta(const PalmParams& p, double budget) {
  validate(p);
  const double x = normalized_budget(p, budget);
  const double t = std::pow(x, p.beta);
  return p.a_max * -std::expm1(-t * p.delta);
}

double palm_slope(const PalmParams& p, double budget) {
  validate(p);
  const double x = normalized_budget(p, budget);
  if (p.delta == 0.0) return 0.0;
  if (p.delta == 1.0) {
    if (x == 0.0) fail_domain("slope undefined at budget/b + alpha == 0 with delta == 1");
    return 0.0;  // accuracy is constant a_max for any positive exponent
  }
  if (x == 0.0 && p.beta < 1.0)
    fail_domain("slope singular at budget/b + alpha == 0 with beta < 1");
  const double rate = -std::log1p(-p.delta);  // -ln(1-delta) > 0
  const double t = std::pow(x, p.beta);
  const double survival = std::exp(-t * rate);  // (1-delta)^(x^beta)
  // beta == 1 at x == 0 takes the x^0 == 1 limit, which pow provides.
  return p.a_max * rate * (p.beta / p.b) * std::pow(x, p.beta - 1.0) * survival;
}

ParamGradient palm_param_gradient(const PalmParams& p, double budget) {
  validate(p);
  const double x = normalized_budget(p, budget);
  if (x == 0.0) fail_domain("gradient requires budget/b + alpha > 0");
  if (p.delta == 1.0) fail_domain("gradient undefined at delta == 1");
  const double log_q = std::log1p(-p.delta);  // ln(1-delta) <= 0
  const double t = std::pow(x, p.beta);
  const double survival = std::exp(t * log_q);  // (1-delta)^t
  ParamGradient g;
  g.d_a_max = -std::expm1(t * log_q);  // == accuracy / a_max
  g.d_delta = p.a_max * t * std::exp((t - 1.0) * log_q);
  g.d_alpha = p.a_max * -log_q * p.beta * std::pow(x, p.beta - 1.0) * survival;
  g.d_beta = p.a_max * -log_q * t * std::log(x) * survival;
  return g;
}

double invert_budget(const PalmParams& p, double target) {
  validate(p);
  require_finite(target, "target");
  if (p.delta == 0.0 || p.delta == 1.0)
    throw Error(ErrorCode::degenerate_model,
                "budget inversion undefined for delta == " + format_double(p.delta));
  if (target < 0.0) fail_domain("target must be >= 0, got " + format_double(target));
  if (target >= p.a_max)
    throw Error(ErrorCode::target_unreachable,
                "target " + format_double(target) + " exceeds the ceiling a_max " +
                    format_double(p.a_max) + " by " + format_double(target - p.a_max));
  const double ratio = std::log1p(-target / p.a_max) / std::log1p(-p.delta);
  const double x = std::pow(ratio, 1.0 / p.beta);
  const double budget = p.b * (x - p.alpha);
  return budget > 0.0 ? budget : 0.0;
}

}  // namespace palm
