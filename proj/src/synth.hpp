#pragma once

#include <cstdint>
#include <vector>

#include "curve.hpp"
#include "model.hpp"

namespace palm {

/// Recipe for a synthetic learning curve: budgets k*b for k = 1..n_iterations
/// with model accuracies plus optional i.i.d. Gaussian noise, clamped to
/// [0, 100].
struct SynthSpec {
  PalmParams params;
  int n_iterations = 1;
  double noise_sigma = 0.0;  ///< percent-points
  std::uint64_t seed = 1;
  int replicates = 1;
};

/// Deterministic generator: noise is drawn from a seeded mt19937_64 via
/// Box-Muller (one normal per draw, cosine branch), replicate-major then
/// iteration order, so curves are reproducible bit-for-bit across platforms.
LearningCurve generate(const SynthSpec& spec);

/// Per-parameter value lists for the brute-force reference fit.
struct OracleGrid {
  std::vector<double> a_max;
  std::vector<double> delta;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::size_t max_combinations = 1'000'000;
};

struct OracleFit {
  PalmParams params;
  double sse;
};

/// Exhaustive SSE minimization over the cartesian product of the grid.
/// Deterministic: ties keep the lexicographically first combination.
/// Intended as an independent reference for the iterative fitter.
OracleFit oracle_fit(const LearningCurve& curve, const OracleGrid& grid);

}  // namespace palm
