#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "error.hpp"
#include "model.hpp"
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

PalmParams draw_interior_params(std::mt19937_64& rng) {
  return {uniform(rng, 30.0, 99.0), uniform(rng, 0.05, 0.9), uniform(rng, 0.2, 5.0),
          uniform(rng, 0.4, 2.5), uniform(rng, 0.5, 50.0)};
}

// A budget at which the model sits at `frac` of its ceiling: keeps draws away
// from the saturated tail where derivatives vanish below noise.
double budget_at_fraction(const PalmParams& p, double frac) {
  return invert_budget(p, frac * p.a_max);
}

// Some random quadruples are saturated from the very first sample (large
// alpha * delta * beta); those carry no usable signal for strictness or
// finite-difference checks, so draws are rejected until the 99.9% budget is
// meaningfully positive.
PalmParams draw_informative_params(std::mt19937_64& rng, double* cap) {
  while (true) {
    const PalmParams p = draw_interior_params(rng);
    const double budget = budget_at_fraction(p, 0.999);
    if (budget > 1e-2) {
      *cap = budget;
      return p;
    }
  }
}

}  // namespace

TEST_CASE("coverage probability frozen values") {
  CHECK(coverage_probability(1.0, 1.0) == 1.0);
  CHECK(coverage_probability(0.3, 0.0) == 0.0);
  // Oracle: 1 - 0.9^10 by exact repeated multiplication.
  const double oracle = 1.0 - pow_int(0.9, 10);
  CHECK(std::abs(coverage_probability(0.1, 10.0) - oracle) < 1e-15);
  CHECK(std::abs(coverage_probability(0.1, 10.0) - 0.6513215599) < 1e-10);
}

TEST_CASE("coverage probability domain errors") {
  CHECK(throws_code(ErrorCode::domain, [] { coverage_probability(-0.1, 1.0); }));
  CHECK(throws_code(ErrorCode::domain, [] { coverage_probability(1.1, 1.0); }));
  CHECK(throws_code(ErrorCode::domain, [] { coverage_probability(0.5, -1.0); }));
  CHECK(throws_code(ErrorCode::domain,
                    [] { coverage_probability(std::nan(""), 1.0); }));
}

TEST_CASE("complement identity holds to a couple of ulp") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double p = uniform(rng, 0.0, 1.0);
    const double s = uniform(rng, 0.0, 200.0);
    const double covered = coverage_probability(p, s);
    const double uncovered = s == 0.0 ? 1.0 : std::exp(s * std::log1p(-p));
    CHECK(std::abs(covered + uncovered - 1.0) <=
          2.0 * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("coverage grows monotonically in the object count and is bounded") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const double p = uniform(rng, 0.01, 0.99);
    double s1 = uniform(rng, 0.0, 100.0);
    double s2 = uniform(rng, 0.0, 100.0);
    if (s1 > s2) std::swap(s1, s2);
    const double c1 = coverage_probability(p, s1);
    const double c2 = coverage_probability(p, s2);
    CHECK(c1 <= c2);
    CHECK(c1 >= 0.0);
    CHECK(c2 <= 1.0);
  }
  CHECK(coverage_probability(0.5, 0.0) == 0.0);
}

TEST_CASE("expected coverage frozen values") {
  CHECK(expected_coverage(0.5, 1.0) == 0.5);
  CHECK(expected_coverage(0.0, 1e6) == 0.0);
  CHECK(std::abs(expected_coverage(0.1, 10.0) - (1.0 - pow_int(0.9, 10))) < 1e-15);
}

TEST_CASE("two-region accuracy frozen values") {
  CHECK(two_region_accuracy({80.0, 10.0, 0.2}, 0.0) == 10.0);
  CHECK(two_region_accuracy({80.0, 10.0, 1.0}, 1.0) == 80.0);
  const double oracle = 10.0 + 70.0 * (1.0 - pow_int(0.9, 10));
  CHECK(std::abs(two_region_accuracy({80.0, 10.0, 0.1}, 10.0) - oracle) < 1e-12);
  CHECK(std::abs(two_region_accuracy({80.0, 10.0, 0.1}, 10.0) - 55.592509193) < 1e-8);
}

TEST_CASE("two-region accuracy stays a convex combination") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const TwoRegionParams p{uniform(rng, 0.0, 100.0), uniform(rng, 0.0, 100.0),
                            uniform(rng, 0.0, 1.0)};
    const double a = two_region_accuracy(p, uniform(rng, 0.0, 50.0));
    CHECK(a >= std::min(p.a_covered, p.a_uncovered) - 1e-12);
    CHECK(a <= std::max(p.a_covered, p.a_uncovered) + 1e-12);
  }
  CHECK(throws_code(ErrorCode::domain,
                    [] { two_region_accuracy({101.0, 0.0, 0.5}, 1.0); }));
}

TEST_CASE("model accuracy frozen values") {
  CHECK(palm_accuracy({90.0, 0.5, 0.0, 1.0, 20.0}, 0.0) == 0.0);
  const double oracle = 90.0 * (1.0 - pow_int(0.9, 10));
  CHECK(std::abs(palm_accuracy({90.0, 0.1, 0.0, 1.0, 1.0}, 10.0) - oracle) < 1e-12);
  CHECK(std::abs(palm_accuracy({90.0, 0.1, 0.0, 1.0, 1.0}, 10.0) - 58.6189) < 1e-4);
}

TEST_CASE("model accuracy approaches its ceiling at large budgets") {
  const PalmParams p{87.1, 0.536, 0.392, 0.381, 20.0};
  const double near = palm_accuracy(p, 1e9);
  CHECK(near <= 87.1);
  CHECK(near > 87.1 - 1e-6);
}

TEST_CASE("model accuracy domain errors") {
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_accuracy({90.0, 0.1, -2.0, 1.0, 1.0}, 1.0); }));
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_accuracy({90.0, 0.1, 0.0, 1.0, 1.0}, -1.0); }));
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_accuracy({90.0, 1.5, 0.0, 1.0, 1.0}, 1.0); }));
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_accuracy({90.0, 0.1, 0.0, 0.0, 1.0}, 1.0); }));
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_accuracy({90.0, 0.1, 0.0, 1.0, 0.0}, 1.0); }));
}

TEST_CASE("delta edge cases evaluate per the documented convention") {
  CHECK(palm_accuracy({90.0, 0.0, 1.0, 1.0, 1.0}, 100.0) == 0.0);
  CHECK(palm_accuracy({90.0, 1.0, 0.0, 1.0, 1.0}, 1.0) == 90.0);
  CHECK(palm_accuracy({90.0, 1.0, 0.0, 1.0, 1.0}, 0.0) == 0.0);
}

TEST_CASE("model accuracy is strictly increasing in the budget") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    double cap = 0.0;
    const PalmParams p = draw_informative_params(rng, &cap);
    double b1 = uniform(rng, 0.0, cap);
    double b2 = uniform(rng, 0.0, cap);
    if (b1 == b2) continue;
    if (b1 > b2) std::swap(b1, b2);
    CHECK(palm_accuracy(p, b1) < palm_accuracy(p, b2));
  }
}

TEST_CASE("model accuracy stays inside [0, a_max)") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 500; ++i) {
    double cap = 0.0;
    const PalmParams p = draw_informative_params(rng, &cap);
    const double a = palm_accuracy(p, uniform(rng, 0.0, cap));
    CHECK(a >= 0.0);
    CHECK(a < p.a_max);
  }
}

TEST_CASE("ceiling is reached in the inversion limit") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 100; ++i) {
    const PalmParams p = draw_interior_params(rng);
    const double budget = invert_budget(p, p.a_max * (1.0 - 1e-9));
    CHECK(palm_accuracy(p, budget) >= p.a_max * (1.0 - 2e-9));
  }
}

TEST_CASE("generalized accuracy frozen values and alias equivalence") {
  CHECK(generalized_accuracy({100.0, 0.2, 0.0, 1.0, 1.0}, 1.0) == doctest::Approx(20.0));
  // 50 * (1 - 0.7^2) = 25.5
  CHECK(std::abs(generalized_accuracy({50.0, 0.3, 2.0, 1.0, 1.0}, 0.0) - 25.5) < 1e-12);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    PalmParams p = draw_interior_params(rng);
    const double budget = uniform(rng, 0.0, 50.0);
    PalmParams unit = p;
    unit.b = 1.0;
    CHECK(generalized_accuracy(p, budget) == palm_accuracy(unit, budget));
  }
}

TEST_CASE("onset offset gives nonzero accuracy at zero budget") {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 100; ++i) {
    PalmParams p = draw_interior_params(rng);
    const double expected =
        p.a_max * (1.0 - std::exp(std::pow(p.alpha, p.beta) * std::log1p(-p.delta)));
    CHECK(std::abs(generalized_accuracy(p, 0.0) - expected) < 1e-12);
    p.alpha = 0.0;
    CHECK(generalized_accuracy(p, 0.0) == 0.0);
  }
}

TEST_CASE("small-delta form frozen values") {
  CHECK(palm_accuracy_small_delta({90.0, 0.0, 0.0, 1.0, 1.0}, 123.0) == 0.0);
  const PalmParams p{90.0, 0.001, 0.0, 1.0, 1.0};
  const double approx = palm_accuracy_small_delta(p, 1000.0);
  CHECK(std::abs(approx - 90.0 * (1.0 - std::exp(-1.0))) < 1e-12);
  const double exact = 90.0 * (1.0 - pow_int(0.999, 1000));
  CHECK(std::abs(exact - approx) < 0.03);
}

TEST_CASE("small-delta form tracks the exact model across the exponent grid") {
  // Exponent x realized directly via b = 1, alpha = 0, beta = 1, budget = x.
  const PalmParams p{90.0, 0.01, 0.0, 1.0, 1.0};
  CHECK(std::abs(palm_accuracy(p, 50.0) - palm_accuracy_small_delta(p, 50.0)) < 0.15);
  double worst = 0.0;
  for (int x = 0; x <= 100; ++x)
    worst = std::max(worst,
                     std::abs(palm_accuracy(p, x) - palm_accuracy_small_delta(p, x)));
  CHECK(worst < 0.5);
}

TEST_CASE("slope matches central finite differences") {
  std::mt19937_64 rng(19);
  int checked = 0;
  while (checked < 100) {
    double cap = 0.0;
    const PalmParams p = draw_informative_params(rng, &cap);
    const double budget = budget_at_fraction(p, uniform(rng, 0.2, 0.95));
    if (budget < 1e-3) continue;  // clamped to the onset; FD probe would go negative
    const double h = 1e-4 * std::max(1.0, budget);
    const double fd = central_diff([&](double bb) { return palm_accuracy(p, bb); },
                                   budget, h);
    CHECK(rel_err(palm_slope(p, budget), fd) < 1e-5);
    ++checked;
  }
}

TEST_CASE("slope limits and sign") {
  CHECK(palm_slope({90.0, 0.0, 1.0, 1.0, 1.0}, 5.0) == 0.0);
  std::mt19937_64 rng(20);
  for (int i = 0; i < 200; ++i) {
    const PalmParams p = draw_interior_params(rng);
    CHECK(palm_slope(p, uniform(rng, 0.0, budget_at_fraction(p, 0.99))) > 0.0);
  }
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_slope({90.0, 0.1, 0.0, 0.5, 1.0}, 0.0); }));
  // beta >= 1 takes the continuous limit at the origin
  CHECK(palm_slope({90.0, 0.1, 0.0, 2.0, 1.0}, 0.0) == 0.0);
}

TEST_CASE("parameter gradient matches central finite differences") {
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 200) {
    double cap = 0.0;
    const PalmParams p = draw_informative_params(rng, &cap);
    const double budget = budget_at_fraction(p, uniform(rng, 0.2, 0.95));
    if (budget < 1e-3) continue;
    ++checked;
    const ParamGradient g = palm_param_gradient(p, budget);

    auto at = [&](auto setter, double v) {
      PalmParams q = p;
      setter(q, v);
      return palm_accuracy(q, budget);
    };
    const double h = 1e-6;
    const double fd_a = central_diff(
        [&](double v) { return at([](PalmParams& q, double w) { q.a_max = w; }, v); },
        p.a_max, h * std::max(1.0, p.a_max));
    const double fd_d = central_diff(
        [&](double v) { return at([](PalmParams& q, double w) { q.delta = w; }, v); },
        p.delta, h * std::max(0.01, p.delta));
    const double fd_al = central_diff(
        [&](double v) { return at([](PalmParams& q, double w) { q.alpha = w; }, v); },
        p.alpha, h * std::max(1.0, p.alpha));
    const double fd_b = central_diff(
        [&](double v) { return at([](PalmParams& q, double w) { q.beta = w; }, v); },
        p.beta, h * std::max(1.0, p.beta));

    CHECK(rel_err(g.d_a_max, fd_a) < 1e-5);
    CHECK(rel_err(g.d_delta, fd_d) < 1e-5);
    CHECK(rel_err(g.d_alpha, fd_al) < 1e-5);
    CHECK(rel_err(g.d_beta, fd_b) < 1e-5);
  }
}

TEST_CASE("gradient identities") {
  std::mt19937_64 rng(22);
  int checked = 0;
  while (checked < 100) {
    double cap = 0.0;
    const PalmParams p = draw_informative_params(rng, &cap);
    const double budget = budget_at_fraction(p, uniform(rng, 0.2, 0.95));
    if (budget < 1e-3) continue;
    ++checked;
    const ParamGradient g = palm_param_gradient(p, budget);
    // A is linear in a_max, so dA/da_max == A / a_max.
    CHECK(palm_accuracy(p, budget) == doctest::Approx(p.a_max * g.d_a_max).epsilon(1e-14));
    CHECK(g.d_delta > 0.0);
  }
  CHECK(throws_code(ErrorCode::domain,
                    [] { palm_param_gradient({90.0, 0.1, 0.0, 1.0, 1.0}, 0.0); }));
}

TEST_CASE("budget inversion frozen values") {
  const PalmParams p{90.0, 0.1, 0.0, 1.0, 1.0};
  const double closed = invert_budget(p, 45.0);
  const double oracle = bisect_budget(p, 45.0, 1e6);
  CHECK(std::abs(closed - oracle) < 1e-6);
  CHECK(std::abs(closed - 6.5788) < 1e-4);
  CHECK(invert_budget(p, 0.0) == 0.0);
  // alpha > 0 clamps negative pre-onset budgets to zero
  CHECK(invert_budget({90.0, 0.1, 2.0, 1.0, 1.0}, 0.0) == 0.0);
}

TEST_CASE("budget inversion round trip") {
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 100) {
    double cap = 0.0;
    const PalmParams p = draw_informative_params(rng, &cap);
    const double budget = budget_at_fraction(p, uniform(rng, 0.05, 0.999));
    if (budget <= 0.0) continue;  // clamped pre-onset budget cannot round-trip
    ++checked;
    const double back = invert_budget(p, palm_accuracy(p, budget));
    CHECK(std::abs(back - budget) <= 1e-6 * std::max(1.0, std::abs(budget)));
  }
}

TEST_CASE("budget inversion reports unreachable targets and degenerate models") {
  const PalmParams p{90.0, 0.1, 0.0, 1.0, 1.0};
  CHECK(throws_code(ErrorCode::target_unreachable, [&] { invert_budget(p, 90.0); }));
  CHECK(throws_code(ErrorCode::target_unreachable, [&] { invert_budget(p, 95.0); }));
  CHECK(throws_code(ErrorCode::domain, [&] { invert_budget(p, -1.0); }));
  CHECK(throws_code(ErrorCode::degenerate_model,
                    [] { invert_budget({90.0, 0.0, 0.0, 1.0, 1.0}, 45.0); }));
  CHECK(throws_code(ErrorCode::degenerate_model,
                    [] { invert_budget({90.0, 1.0, 0.0, 1.0, 1.0}, 45.0); }));
}
