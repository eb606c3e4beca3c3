#include "analysis.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "format.hpp"

namespace palm {

namespace {

constexpr double kAccuracyTieTolerance = 1e-9;  // percent-points
constexpr int kBisectionSteps = 80;

int sign_with_tie(double d, double tol) {
  if (std::abs(d) < tol) return 0;
  return d > 0.0 ? 1 : -1;
}

Verdict verdict_from_sign(int s) {
  if (s > 0) return Verdict::first;
  if (s < 0) return Verdict::second;
  return Verdict::tie;
}

Verdict compare_values(double first, double second) {
  if (first > second) return Verdict::first;
  if (first < second) return Verdict::second;
  return Verdict::tie;
}

}  // namespace

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::first: return "first";
    case Verdict::second: return "second";
    case Verdict::tie: return "tie";
  }
  return "?";
}

ComparisonReport compare(const PalmParams& first, const PalmParams& second,
                         const std::vector<double>& budgets) {
  validate(first);
  validate(second);
  if (budgets.empty())
    throw Error(ErrorCode::invalid_argument, "budget grid must be nonempty");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    if (!(budgets[i] > budgets[i - 1]))
      throw Error(ErrorCode::invalid_argument, "budget grid must be strictly ascending");

  ComparisonReport report;
  auto diff = [&](double budget) {
    return palm_accuracy(first, budget) - palm_accuracy(second, budget);
  };

  std::vector<double> diffs;
  diffs.reserve(budgets.size());
  for (double budget : budgets) {
    const double d = diff(budget);
    diffs.push_back(d);
    report.winner_at.emplace_back(
        budget, verdict_from_sign(sign_with_tie(d, kAccuracyTieTolerance)));
  }

  // Sign scan over the grid, then bisection inside each strict flip. A grid
  // budget whose difference already sits inside the tie band counts as a
  // crossover when its nonzero neighbors disagree.
  std::vector<int> signs(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i)
    signs[i] = sign_with_tie(diffs[i], kAccuracyTieTolerance);
  for (std::size_t i = 0; i + 1 < budgets.size(); ++i) {
    if (signs[i] * signs[i + 1] < 0) {
      double lo = budgets[i], hi = budgets[i + 1];
      double d_lo = diffs[i];
      for (int step = 0; step < kBisectionSteps; ++step) {
        const double mid = 0.5 * (lo + hi);
        const double d_mid = diff(mid);
        if (d_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((d_lo > 0.0) == (d_mid > 0.0)) {
          lo = mid;
          d_lo = d_mid;
        } else {
          hi = mid;
        }
      }
      report.crossovers.push_back(0.5 * (lo + hi));
    } else if (signs[i] == 0 && (i == 0 || signs[i - 1] != 0)) {
      int prev = 0, next = 0;
      for (std::size_t j = i; j-- > 0;)
        if (signs[j] != 0) { prev = signs[j]; break; }
      for (std::size_t j = i + 1; j < signs.size(); ++j)
        if (signs[j] != 0) { next = signs[j]; break; }
      if (prev * next < 0) report.crossovers.push_back(budgets[i]);
    }
  }
  std::sort(report.crossovers.begin(), report.crossovers.end());

  report.asymptotic_winner = verdict_from_sign(
      sign_with_tie(first.a_max - second.a_max, kAccuracyTieTolerance));

  for (double budget : budgets) {
    try {
      report.slope_winner_at.emplace_back(budget, growth_criterion(first, second, budget));
    } catch (const Error&) {
      // slope singular or undefined at this budget; leave it out
    }
  }

  report.parameter_breakdown.higher_a_max = compare_values(first.a_max, second.a_max);
  report.parameter_breakdown.higher_delta = compare_values(first.delta, second.delta);
  report.parameter_breakdown.lower_alpha = compare_values(second.alpha, first.alpha);
  report.parameter_breakdown.higher_beta = compare_values(first.beta, second.beta);
  report.parameter_breakdown.lower_b = compare_values(second.b, first.b);
  return report;
}

Verdict growth_criterion(const PalmParams& first, const PalmParams& second, double budget) {
  const double s1 = palm_slope(first, budget);
  const double s2 = palm_slope(second, budget);
  const double tol = 1e-12 * std::max({1.0, std::abs(s1), std::abs(s2)});
  if (std::abs(s1 - s2) <= tol) return Verdict::tie;
  return s1 > s2 ? Verdict::first : Verdict::second;
}

PredictionReport predict_from_prefix(const LearningCurve& curve, std::size_t prefix_size,
                                     const FitConfig& config) {
  if (prefix_size < 4)
    throw Error(ErrorCode::too_few_points, "prefix fitting requires at least 4 budgets");
  const auto budgets = curve.distinct_budgets();
  if (prefix_size >= budgets.size())
    throw Error(ErrorCode::range,
                "prefix of " + std::to_string(prefix_size) + " budgets leaves no held-out " +
                    "points in a curve with " + std::to_string(budgets.size()));

  PredictionReport report;
  report.prefix_size = prefix_size;
  report.fitted = fit(prefix(curve, prefix_size), config);

  const double cutoff = budgets[prefix_size - 1];
  double abs_sum = 0.0, sq_sum = 0.0;
  for (const CurvePoint& pt : curve.points()) {
    if (pt.budget <= cutoff) continue;
    const double predicted = palm_accuracy(report.fitted.params, pt.budget);
    const double err = predicted - pt.accuracy;
    report.predictions.emplace_back(pt.budget, predicted);
    report.holdout_errors.push_back(err);
    abs_sum += std::abs(err);
    sq_sum += err * err;
    report.max_abs_err = std::max(report.max_abs_err, std::abs(err));
  }
  const auto n = static_cast<double>(report.holdout_errors.size());
  report.mae = abs_sum / n;
  report.rmse = std::sqrt(sq_sum / n);
  return report;
}

BudgetRequirement required_budget(const FitResult& fit, double target) {
  if (fit.degenerate)
    throw Error(ErrorCode::degenerate_model,
                "cannot invert a degenerate (constant-accuracy) fit");
  const double samples = invert_budget(fit.params, target);
  return {samples, samples / fit.params.b};
}

}  // namespace palm
