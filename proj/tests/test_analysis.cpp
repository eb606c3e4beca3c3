#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "analysis.hpp"
#include "error.hpp"
#include "synth.hpp"
#include "test_support.hpp"

using namespace palm;
using namespace testutil;

namespace {

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

std::vector<double> grid(double start, double stop, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(start + (stop - start) * i / static_cast<double>(n - 1));
  return out;
}

}  // namespace

TEST_CASE("identical models tie everywhere with no crossovers") {
  const PalmParams p{85.0, 0.3, 1.0, 0.8, 20.0};
  const ComparisonReport report = compare(p, p, grid(0.0, 2000.0, 101));
  for (const auto& [budget, verdict] : report.winner_at) CHECK(verdict == Verdict::tie);
  CHECK(report.crossovers.empty());
  CHECK(report.asymptotic_winner == Verdict::tie);
  for (const auto& [budget, verdict] : report.slope_winner_at)
    CHECK(verdict == Verdict::tie);
}

TEST_CASE("a higher ceiling wins at every positive budget and asymptotically") {
  PalmParams first{91.0, 0.3, 1.0, 0.8, 20.0};
  PalmParams second = first;
  second.a_max = 90.0;
  const ComparisonReport report = compare(first, second, grid(20.0, 2000.0, 100));
  for (const auto& [budget, verdict] : report.winner_at) CHECK(verdict == Verdict::first);
  CHECK(report.asymptotic_winner == Verdict::first);
  CHECK(report.crossovers.empty());
  CHECK(report.parameter_breakdown.higher_a_max == Verdict::first);
}

TEST_CASE("fast-start vs high-ceiling pair crosses exactly once") {
  const PalmParams fast{80.0, 0.5, 0.0, 1.0, 1.0};
  const PalmParams tall{90.0, 0.05, 0.0, 1.0, 1.0};
  std::vector<double> budgets;
  for (int i = 0; i <= 100; ++i) budgets.push_back(i);
  const ComparisonReport report = compare(fast, tall, budgets);
  REQUIRE(report.crossovers.size() == 1);
  const double cross = report.crossovers.front();

  // Independent bisection oracle on the accuracy difference.
  auto diff = [&](double budget) {
    return palm_accuracy(fast, budget) - palm_accuracy(tall, budget);
  };
  double lo = 1.0, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (diff(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  CHECK(std::abs(cross - 0.5 * (lo + hi)) < 1e-9);
  CHECK(std::abs(diff(cross)) < 1e-6);
  // winner flips across the crossover
  CHECK(diff(cross - 1e-3) > 0.0);
  CHECK(diff(cross + 1e-3) < 0.0);
  CHECK(report.asymptotic_winner == Verdict::second);
  CHECK(report.winner_at.front().second == Verdict::tie);  // both zero at B=0
  CHECK(report.winner_at[1].second == Verdict::first);
  CHECK(report.winner_at.back().second == Verdict::second);
}

TEST_CASE("winner verdicts agree with direct evaluation") {
  std::mt19937_64 rng(41);
  for (int pair = 0; pair < 20; ++pair) {
    const PalmParams a{uniform(rng, 40.0, 95.0), uniform(rng, 0.05, 0.7),
                       uniform(rng, 0.0, 4.0), uniform(rng, 0.4, 2.0),
                       uniform(rng, 5.0, 30.0)};
    const PalmParams b{uniform(rng, 40.0, 95.0), uniform(rng, 0.05, 0.7),
                       uniform(rng, 0.0, 4.0), uniform(rng, 0.4, 2.0),
                       uniform(rng, 5.0, 30.0)};
    const auto budgets = grid(0.0, 3000.0, 173);
    const ComparisonReport report = compare(a, b, budgets);
    REQUIRE(report.winner_at.size() == budgets.size());
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      const double d = palm_accuracy(a, budgets[i]) - palm_accuracy(b, budgets[i]);
      const Verdict expect =
          std::abs(d) < 1e-9 ? Verdict::tie : (d > 0 ? Verdict::first : Verdict::second);
      CHECK(report.winner_at[i].second == expect);
    }
    for (double cross : report.crossovers) {
      CHECK(std::abs(palm_accuracy(a, cross) - palm_accuracy(b, cross)) < 1e-6);
      const double before = palm_accuracy(a, cross - 1e-4) - palm_accuracy(b, cross - 1e-4);
      const double after = palm_accuracy(a, cross + 1e-4) - palm_accuracy(b, cross + 1e-4);
      CHECK(before * after < 0.0);
    }
  }
}

TEST_CASE("asymptotic dominance holds beyond the near-ceiling budget") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    PalmParams winner{uniform(rng, 50.0, 99.0), uniform(rng, 0.05, 0.7),
                      uniform(rng, 0.0, 4.0), uniform(rng, 0.4, 2.0),
                      uniform(rng, 5.0, 30.0)};
    PalmParams loser = winner;
    loser.a_max = winner.a_max - uniform(rng, 1e-6, 5.0);
    loser.delta = uniform(rng, 0.05, 0.7);
    loser.beta = uniform(rng, 0.4, 2.0);
    const double horizon =
        std::max(invert_budget(winner, winner.a_max * (1.0 - 1e-9)),
                 invert_budget(loser, loser.a_max * (1.0 - 1e-9)));
    for (double mult : {1.0, 2.0, 10.0})
      CHECK(palm_accuracy(winner, horizon * mult) > palm_accuracy(loser, horizon * mult));
  }
}

TEST_CASE("growth criterion basics") {
  const PalmParams p{85.0, 0.3, 1.0, 0.8, 20.0};
  CHECK(growth_criterion(p, p, 100.0) == Verdict::tie);

  PalmParams more_coverage = p;
  more_coverage.delta = 0.4;
  for (double budget : {0.0, 40.0, 400.0, 4000.0})
    CHECK(growth_criterion(more_coverage, p, budget) == Verdict::first);
}

TEST_CASE("growth criterion agrees with finite-difference slopes") {
  std::mt19937_64 rng(43);
  int checked = 0;
  while (checked < 50) {
    const PalmParams a{uniform(rng, 40.0, 95.0), uniform(rng, 0.05, 0.7),
                       uniform(rng, 0.2, 4.0), uniform(rng, 0.4, 2.0),
                       uniform(rng, 5.0, 30.0)};
    const PalmParams b{uniform(rng, 40.0, 95.0), uniform(rng, 0.05, 0.7),
                       uniform(rng, 0.2, 4.0), uniform(rng, 0.4, 2.0),
                       uniform(rng, 5.0, 30.0)};
    const double budget = uniform(rng, 10.0, 500.0);
    const double h = 1e-4 * std::max(1.0, budget);
    const double fd_a = central_diff([&](double x) { return palm_accuracy(a, x); }, budget, h);
    const double fd_b = central_diff([&](double x) { return palm_accuracy(b, x); }, budget, h);
    if (std::abs(fd_a - fd_b) < 1e-7) continue;  // too close for the FD oracle
    const Verdict expect = fd_a > fd_b ? Verdict::first : Verdict::second;
    CHECK(growth_criterion(a, b, budget) == expect);
    ++checked;
  }
}

TEST_CASE("noiseless prefix prediction recovers the trajectory") {
  SynthSpec spec;
  spec.params = {87.0, 0.3, 0.5, 0.6, 20.0};
  spec.n_iterations = 100;
  const LearningCurve curve = generate(spec);
  const PredictionReport report = predict_from_prefix(curve, 20);
  CHECK(report.prefix_size == 20);
  CHECK(report.predictions.size() == 80);
  CHECK(report.holdout_errors.size() == 80);
  CHECK(report.max_abs_err < 1e-3);
  CHECK(report.mae <= report.max_abs_err);
  CHECK(report.rmse <= report.max_abs_err + 1e-12);

  // any prefix >= 6 recovers the generator within tolerance
  for (std::size_t size : {6u, 10u, 50u})
    CHECK(predict_from_prefix(curve, size).max_abs_err < 1e-2);
}

TEST_CASE("prefix prediction preconditions") {
  SynthSpec spec;
  spec.params = {87.0, 0.3, 0.5, 0.6, 20.0};
  spec.n_iterations = 30;
  const LearningCurve curve = generate(spec);
  CHECK(throws_code(ErrorCode::too_few_points, [&] { predict_from_prefix(curve, 3); }));
  CHECK(throws_code(ErrorCode::range, [&] { predict_from_prefix(curve, 30); }));
  CHECK(throws_code(ErrorCode::range, [&] { predict_from_prefix(curve, 31); }));
}

TEST_CASE("noisy prefix prediction stays within a couple of points") {
  SynthSpec spec;
  spec.params = {87.1, 0.536, 0.392, 0.381, 20.0};
  spec.n_iterations = 100;
  spec.noise_sigma = 0.5;
  spec.seed = 4242;
  const PredictionReport report = predict_from_prefix(generate(spec), 20);
  CHECK(report.mae <= 2.0);
}

TEST_CASE("holdout budgets are disjoint from the prefix") {
  SynthSpec spec;
  spec.params = {87.0, 0.3, 0.5, 0.6, 20.0};
  spec.n_iterations = 50;
  const LearningCurve curve = generate(spec);
  const PredictionReport report = predict_from_prefix(curve, 10);
  const double cutoff = curve.distinct_budgets()[9];
  for (const auto& [budget, predicted] : report.predictions) CHECK(budget > cutoff);
}

TEST_CASE("required budget round-trips through the forward model") {
  SynthSpec spec;
  spec.params = {88.0, 0.2, 1.0, 0.9, 25.0};
  spec.n_iterations = 60;
  const FitResult fitted = fit(generate(spec));
  const double probe = palm_accuracy(fitted.params, 500.0);
  const BudgetRequirement req = required_budget(fitted, probe);
  CHECK(std::abs(req.samples - 500.0) / 500.0 < 1e-6);
  CHECK(req.iterations == doctest::Approx(req.samples / 25.0));
}

TEST_CASE("required budget edge cases") {
  SynthSpec spec;
  spec.params = {88.0, 0.2, 0.0, 0.9, 25.0};
  spec.n_iterations = 60;
  const FitResult fitted = fit(generate(spec));
  CHECK(throws_code(ErrorCode::target_unreachable,
                    [&] { required_budget(fitted, fitted.params.a_max); }));
  CHECK(required_budget(fitted, 0.0).samples == 0.0);

  FitResult degenerate = fitted;
  degenerate.degenerate = true;
  CHECK(throws_code(ErrorCode::degenerate_model, [&] { required_budget(degenerate, 10.0); }));
}

TEST_CASE("compare validates its budget grid") {
  const PalmParams p{85.0, 0.3, 1.0, 0.8, 20.0};
  CHECK(throws_code(ErrorCode::invalid_argument, [&] { compare(p, p, {}); }));
  CHECK(throws_code(ErrorCode::invalid_argument, [&] { compare(p, p, {10.0, 10.0}); }));
  CHECK(throws_code(ErrorCode::invalid_argument, [&] { compare(p, p, {10.0, 5.0}); }));
}
