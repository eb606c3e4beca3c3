#pragma once

namespace palm {

/// Saturating accuracy model for iterative labeling runs:
///
///     A(B) = a_max * (1 - (1 - delta)^((B/b + alpha)^beta))
///
/// B is the cumulative number of labeled samples, b the mean number of
/// samples added per iteration. Accuracies are percents in [0, 100].
struct PalmParams {
  double a_max;    ///< accuracy ceiling, percent
  double delta;    ///< coverage fraction per labeled sample, in [0, 1]
  double alpha;    ///< learning-onset shift, in iterations
  double beta;     ///< growth-scaling exponent, > 0
  double b = 1.0;  ///< mean labeled samples per iteration, > 0
};

/// Two-region accuracy decomposition: accuracy in covered regions mixed with
/// accuracy in uncovered regions by the coverage probability after B samples.
struct TwoRegionParams {
  double a_covered;    ///< accuracy in covered regions, percent
  double a_uncovered;  ///< accuracy in uncovered regions, percent
  double delta;        ///< coverage fraction per sample, in [0, 1]
};

/// Partial derivatives of the model accuracy at a fixed budget.
struct ParamGradient {
  double d_a_max;
  double d_delta;
  double d_alpha;
  double d_beta;
};

/// Throws Error(domain) if any field is non-finite or out of range.
/// a_max of exactly 0 is tolerated (identically-zero model): it only arises
/// from degenerate constant-curve fits and keeps such results evaluable.
void validate(const PalmParams& p);
void validate(const TwoRegionParams& p);

/// Probability that a point is covered by at least one of s independently
/// placed objects, each covering it with probability p: 1 - (1-p)^s.
/// s may be non-integer. Throws Error(domain) on p outside [0,1] or s < 0.
double coverage_probability(double p, double s);

/// Expected fraction of the space covered by `budget` samples each covering
/// a fraction delta: same functional form as coverage_probability.
double expected_coverage(double delta, double budget);

/// A_C * (1 - (1-delta)^B) + A_UC * (1-delta)^B. Always within
/// [min(A_C, A_UC), max(A_C, A_UC)].
double two_region_accuracy(const TwoRegionParams& p, double budget);

/// Evaluates the model at a cumulative budget. Requires budget >= 0 and
/// budget/b + alpha >= 0. Strictly increasing in budget for delta in (0,1).
double palm_accuracy(const PalmParams& p, double budget);

/// Un-normalized variant: identical to palm_accuracy with b forced to 1.
/// The b field of `p` is ignored.
double generalized_accuracy(const PalmParams& p, double budget);

/// First-order approximation a_max * (1 - exp(-(B/b + alpha)^beta * delta)),
/// accurate for small delta.
double palm_accuracy_small_delta(const PalmParams& p, double budget);

/// dA/dB. Requires budget/b + alpha > 0 when beta < 1 (the derivative is
/// singular there); at budget/b + alpha == 0 with beta >= 1 the continuous
/// limit is returned.
double palm_slope(const PalmParams& p, double budget);

/// Closed-form gradient over (a_max, delta, alpha, beta) at a fixed budget.
/// Requires budget/b + alpha > 0 and delta < 1.
ParamGradient palm_param_gradient(const PalmParams& p, double budget);

/// Closed-form inverse: the cumulative budget at which the model reaches
/// `target` percent, clamped below at 0. Throws Error(target_unreachable)
/// when target >= a_max and Error(degenerate_model) when delta is 0 or 1.
double invert_budget(const PalmParams& p, double target);

}  // namespace palm
