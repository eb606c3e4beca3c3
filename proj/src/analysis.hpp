#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "fitter.hpp"
#include "model.hpp"

namespace palm {

enum class Verdict { first, second, tie };

const char* verdict_name(Verdict v) noexcept;

/// Side-by-side evaluation of two fitted models over a budget grid.
struct ComparisonReport {
  /// Accuracy winner at every requested budget (ties within 1e-9 percent).
  std::vector<std::pair<double, Verdict>> winner_at;
  /// Budgets where the accuracy difference changes sign, located by bisection
  /// between consecutive grid budgets; sorted ascending.
  std::vector<double> crossovers;
  /// Winner by a_max ordering (the large-budget limit).
  Verdict asymptotic_winner = Verdict::tie;
  /// Slope (dA/dB) winner where both derivatives are defined; budgets where
  /// either slope is singular are omitted.
  std::vector<std::pair<double, Verdict>> slope_winner_at;
  /// Descriptive per-parameter comparison, keyed by the direction that favors
  /// faster learning. Not a performance verdict: the winner entries above
  /// always come from direct evaluation.
  struct ParameterBreakdown {
    Verdict higher_a_max = Verdict::tie;
    Verdict higher_delta = Verdict::tie;
    Verdict lower_alpha = Verdict::tie;
    Verdict higher_beta = Verdict::tie;
    Verdict lower_b = Verdict::tie;
  } parameter_breakdown;
};

/// Requires a nonempty, strictly ascending budget grid.
ComparisonReport compare(const PalmParams& first, const PalmParams& second,
                         const std::vector<double>& budgets);

/// Which model gains accuracy faster at the given budget, by exact derivative
/// comparison. Ties within 1e-12 relative.
Verdict growth_criterion(const PalmParams& first, const PalmParams& second, double budget);

/// Fit on a prefix, evaluate on everything after it.
struct PredictionReport {
  std::size_t prefix_size = 0;
  FitResult fitted;
  /// (budget, predicted accuracy) for every held-out observation, curve order.
  std::vector<std::pair<double, double>> predictions;
  /// predicted minus observed, aligned with `predictions`.
  std::vector<double> holdout_errors;
  double mae = 0.0;
  double rmse = 0.0;
  double max_abs_err = 0.0;
};

/// Requires prefix_size >= 4 and at least one held-out budget beyond it.
PredictionReport predict_from_prefix(const LearningCurve& curve, std::size_t prefix_size,
                                     const FitConfig& config = {});

struct BudgetRequirement {
  double samples;     ///< cumulative labeled samples
  double iterations;  ///< samples / b
};

/// Inverts the fitted model at a target accuracy. Refuses degenerate fits.
BudgetRequirement required_budget(const FitResult& fit, double target);

}  // namespace palm
