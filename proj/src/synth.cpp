#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "error.hpp"

namespace palm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform in [0, 1) with the full 53-bit mantissa, independent of the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller, cosine branch only.
double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

LearningCurve generate(const SynthSpec& spec) {
  validate(spec.params);
  if (spec.n_iterations < 1)
    throw Error(ErrorCode::invalid_argument, "n_iterations must be >= 1");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma))
    throw Error(ErrorCode::invalid_argument, "noise_sigma must be finite and >= 0");
  if (spec.replicates < 1)
    throw Error(ErrorCode::invalid_argument, "replicates must be >= 1");

  std::mt19937_64 rng(spec.seed);
  std::vector<CurvePoint> points;
  points.reserve(static_cast<std::size_t>(spec.n_iterations) * spec.replicates);
  for (int rep = 1; rep <= spec.replicates; ++rep) {
    for (int k = 1; k <= spec.n_iterations; ++k) {
      const double budget = static_cast<double>(k) * spec.params.b;
      double accuracy = palm_accuracy(spec.params, budget);
      if (spec.noise_sigma > 0.0) accuracy += spec.noise_sigma * gaussian(rng);
      accuracy = std::clamp(accuracy, 0.0, 100.0);
      points.push_back({budget, accuracy, spec.replicates > 1 ? rep : 0});
    }
  }
  return LearningCurve(std::move(points), spec.params.b, {}, spec.replicates > 1);
}

OracleFit oracle_fit(const LearningCurve& curve, const OracleGrid& grid) {
  if (grid.a_max.empty() || grid.delta.empty() || grid.alpha.empty() || grid.beta.empty())
    throw Error(ErrorCode::invalid_argument, "oracle grid has an empty dimension");
  const std::size_t combos =
      grid.a_max.size() * grid.delta.size() * grid.alpha.size() * grid.beta.size();
  if (combos > grid.max_combinations)
    throw Error(ErrorCode::grid_too_large,
                std::to_string(combos) + " combinations exceed the cap of " +
                    std::to_string(grid.max_combinations));
  for (double v : grid.a_max)
    if (!(v >= 0.0 && v <= 100.0))
      throw Error(ErrorCode::invalid_argument, "grid a_max value outside [0, 100]");
  for (double v : grid.delta)
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorCode::invalid_argument, "grid delta value outside [0, 1]");
  for (double v : grid.alpha)
    if (!(v >= 0.0))
      throw Error(ErrorCode::invalid_argument, "grid alpha value must be >= 0");
  for (double v : grid.beta)
    if (!(v > 0.0))
      throw Error(ErrorCode::invalid_argument, "grid beta value must be > 0");

  OracleFit best{};
  best.sse = std::numeric_limits<double>::infinity();
  for (double a_max : grid.a_max)
    for (double delta : grid.delta)
      for (double alpha : grid.alpha)
        for (double beta : grid.beta) {
          const PalmParams p{a_max, delta, alpha, beta, curve.b()};
          double sse = 0.0;
          for (const CurvePoint& pt : curve.points()) {
            const double r = pt.accuracy - palm_accuracy(p, pt.budget);
            sse += r * r;
          }
          if (sse < best.sse) best = {p, sse};
        }
  return best;
}

}  // namespace palm
