#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pogd/errors.hpp"
#include "pogd/rng.hpp"
#include "pogd/scheduler.hpp"

using namespace pogd;

TEST_CASE("energy accumulates root-sum-of-squares") {
  GradientEnergy e;
  e = update_energy(e, Vector{3.0});
  CHECK(e.total() == 3.0);
  e = update_energy(e, Vector{4.0});
  CHECK(e.total() == 5.0);  // 3-4-5
  e = update_energy(e, Vector{0.0});
  CHECK(e.total() == 5.0);
}

TEST_CASE("energy tracks coordinates when enabled") {
  GradientEnergy e = GradientEnergy::with_coordinates(2);
  e = update_energy(e, Vector{3.0, 0.0});
  e = update_energy(e, Vector{0.0, 4.0});
  CHECK(e.total() == 5.0);
  CHECK(e.coordinate_totals() == std::vector<double>{3.0, 4.0});
}

TEST_CASE("energy recomputation stays within tolerance") {
  const CounterRng rng(5);
  GradientEnergy e;
  double fresh = 0.0;
  for (int t = 0; t < 500; ++t) {
    const Vector g{2.0 * rng.uniform(2 * t) - 1.0,
                   2.0 * rng.uniform(2 * t + 1) - 1.0};
    e = update_energy(e, g);
    fresh += g[0] * g[0] + g[1] * g[1];
    CHECK(e.total() * e.total() ==
          doctest::Approx(fresh).epsilon(1e-10));
    CHECK(e.total() >= 0.0);
  }
}

TEST_CASE("non-finite gradients are rejected") {
  GradientEnergy e;
  CHECK_THROWS_AS(update_energy(e, Vector{std::nan("")}), std::invalid_argument);
}

TEST_CASE("constant oracle rate") {
  CHECK(rate_constant_oracle(1.0, 0.0, 10.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(rate_constant_oracle(1.0, 4.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rate_constant_oracle(2.0, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(rate_constant_oracle(1.0, 0.0, 0.0), OracleUndefinedError);
}

TEST_CASE("adaptive rate") {
  CHECK(rate_adaptive(2.0, 1.0, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rate_adaptive(1.0, 0.0, 1.0) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(rate_adaptive(1.0, 0.0, 2.0) ==
        doctest::Approx(0.3535533905932738).epsilon(1e-15));
  CHECK_THROWS_AS(rate_adaptive(1.0, 0.0, 0.0), RateUndefinedError);
}

TEST_CASE("adaptive rate is the oracle rate over sqrt(2)") {
  const CounterRng rng(8);
  for (int i = 0; i < 100; ++i) {
    const double d = 0.1 + 5.0 * rng.uniform(3 * i);
    const double p = 10.0 * rng.uniform(3 * i + 1) * d;
    const double g = 0.01 + 20.0 * rng.uniform(3 * i + 2);
    CHECK(rate_adaptive(d, p, g) * std::sqrt(2.0) ==
          doctest::Approx(rate_constant_oracle(d, p, g)).epsilon(1e-12));
  }
}

TEST_CASE("per-coordinate rates: dormant and pinned coordinates") {
  const auto matches_scalar =
      rate_per_coordinate({2.0, 2.0}, {1.0, 1.0}, {4.0, 4.0});
  REQUIRE(matches_scalar.size() == 2);
  CHECK(*matches_scalar[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(*matches_scalar[1] == doctest::Approx(0.5).epsilon(1e-15));

  const auto with_dormant = rate_per_coordinate({1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0});
  CHECK(*with_dormant[0] == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK_FALSE(with_dormant[1].has_value());

  const auto pinned = rate_per_coordinate({0.0, 1.0}, {0.0, 0.0}, {5.0, 1.0});
  CHECK(*pinned[0] == 0.0);
  CHECK(*pinned[1] == doctest::Approx(0.7071067811865476).epsilon(1e-15));

  CHECK_THROWS_AS(rate_per_coordinate({1.0}, {0.0, 0.0}, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("doubling segment layout") {
  const DoublingSegment s1 = doubling_segment(1);
  CHECK(s1.index == 1);
  CHECK(s1.start == 1);
  CHECK(s1.next_start == 2);

  const DoublingSegment s3 = doubling_segment(3);
  CHECK(s3.index == 2);
  CHECK(s3.start == 2);
  CHECK(s3.next_start == 4);

  const DoublingSegment s4 = doubling_segment(4);
  CHECK(s4.index == 3);
  CHECK(s4.start == 4);
  CHECK(s4.next_start == 8);
  CHECK(doubling_segment(7).index == 3);

  CHECK_THROWS_AS(doubling_segment(0), std::invalid_argument);
}

TEST_CASE("shipped budget functions satisfy their envelope") {
  const double d = 2.0;
  const PathBudgetFunction fns[] = {
      PathBudgetFunction::constant(3.0, d),
      PathBudgetFunction::sqrt_growth(0.5, d),
      PathBudgetFunction::linear_growth(0.25, d),
  };
  const CounterRng rng(17);
  for (const PathBudgetFunction& fn : fns) {
    CHECK(fn(1) == 0.0);  // no room for variation in a single round
    double prev = 0.0;
    for (std::int64_t t = 1; t <= 300; ++t) {
      const double p = fn(t);
      CHECK(p >= prev - 1e-12);
      CHECK(p <= d * static_cast<double>(t - 1) + 1e-9);
      prev = p;
    }
    // Randomized sub-additivity grid.
    for (int i = 0; i < 300; ++i) {
      const std::int64_t t1 =
          1 + static_cast<std::int64_t>(rng.word(2 * i) % 900);
      const std::int64_t t2 =
          1 + static_cast<std::int64_t>(rng.word(2 * i + 1) % 900);
      CHECK(fn(t1 + t2) <= fn(t1) + fn(t2 + 1) + 1e-9);
    }
  }
}

TEST_CASE("custom budget functions are validated at construction") {
  // Super-additive growth violates the envelope.
  CHECK_THROWS_AS(PathBudgetFunction::custom(
                      "quadratic", [](std::int64_t t) {
                        return 0.001 * static_cast<double>(t) *
                               static_cast<double>(t);
                      },
                      2.0),
                  std::invalid_argument);
  // Decreasing is rejected.
  CHECK_THROWS_AS(PathBudgetFunction::custom(
                      "shrinking",
                      [](std::int64_t t) { return t < 10 ? 1.0 * (t - 1) : 0.5; },
                      2.0),
                  std::invalid_argument);
  // Exceeds D * (T - 1).
  CHECK_THROWS_AS(PathBudgetFunction::custom(
                      "too-big",
                      [](std::int64_t t) { return 3.0 * static_cast<double>(t - 1); },
                      2.0),
                  std::invalid_argument);
}

TEST_CASE("doubling segment budgets are nondecreasing and capped") {
  const double d = 2.0;
  const PathBudgetFunction fns[] = {
      PathBudgetFunction::sqrt_growth(0.2 * d, d),
      PathBudgetFunction::sqrt_growth(d, d),
      PathBudgetFunction::linear_growth(0.1, d),
      PathBudgetFunction::constant(4.0, d),
  };
  for (const PathBudgetFunction& fn : fns) {
    double prev = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double pk = doubling_segment_budget(fn, k);
      CHECK(pk >= prev - 1e-12);
      prev = pk;
      // Whenever the horizon reaches the segment, the pinned budget is at
      // most twice the horizon budget.
      for (std::int64_t horizon : {std::int64_t{1} << (k - 1),
                                   (std::int64_t{1} << k) - 1,
                                   std::int64_t{1} << k}) {
        CHECK(pk <= 2.0 * fn(horizon) + 1e-9);
      }
    }
  }
}
