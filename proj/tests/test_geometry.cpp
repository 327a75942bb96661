#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pogd/geometry.hpp"
#include "pogd/rng.hpp"

using namespace pogd;

namespace {

Vector random_point_near(const FeasibleSet& set, const CounterRng& rng,
                         std::uint64_t base) {
  // Points over roughly twice the set's extent, so many fall outside.
  Vector p(set.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double u = rng.uniform(base + i);
    if (set.is_box()) {
      const double mid = 0.5 * (set.lower()[i] + set.upper()[i]);
      const double half = 0.5 * (set.upper()[i] - set.lower()[i]);
      p[i] = mid + (4.0 * u - 2.0) * std::max(half, 0.25);
    } else {
      p[i] = set.center()[i] + (4.0 * u - 2.0) * set.radius();
    }
  }
  return p;
}

}  // namespace

TEST_CASE("projection onto a ball scales along the ray") {
  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  const Vector p = ball.project(Vector{3.0, 4.0});
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("projection onto a box clamps per coordinate") {
  const FeasibleSet box = FeasibleSet::box(Vector{0.0, 0.0}, Vector{1.0, 1.0});
  const Vector p = box.project(Vector{2.0, -3.0});
  CHECK(p == Vector{1.0, 0.0});
}

TEST_CASE("interior points project to themselves unchanged") {
  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  const Vector inside{0.2, 0.1};
  CHECK(ball.project(inside) == inside);
  // Center tie: stays put.
  CHECK(ball.project(Vector{0.0, 0.0}) == Vector{0.0, 0.0});
}

TEST_CASE("projection rejects dimension mismatches") {
  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  CHECK_THROWS_AS(ball.project(Vector{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ball.project(Vector{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("diameters are analytic") {
  CHECK(FeasibleSet::ball(Vector{0.0}, 1.0).diameter() == 2.0);
  CHECK(FeasibleSet::box(Vector{0.0, 0.0}, Vector{3.0, 4.0}).diameter() == 5.0);
  CHECK(FeasibleSet::box(Vector{-1.0}, Vector{1.0}).diameter() == 2.0);
}

TEST_CASE("coordinate diameters") {
  const FeasibleSet box = FeasibleSet::box(Vector{0.0, 0.0}, Vector{3.0, 4.0});
  CHECK(box.coordinate_diameters() == Vector{3.0, 4.0});
  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 2.0);
  CHECK(ball.coordinate_diameters() == Vector{4.0, 4.0});
  const FeasibleSet degenerate = FeasibleSet::box(Vector{1.0, 1.0}, Vector{1.0, 5.0});
  CHECK(degenerate.coordinate_diameters() == Vector{0.0, 4.0});
}

TEST_CASE("path variation sums successive distances") {
  CHECK(path_variation({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}) == 0.0);
  CHECK(path_variation({{0.0, 0.0}, {3.0, 4.0}}) == 5.0);
  CHECK(path_variation({{0.0}, {1.0}, {0.0}}) == 2.0);
  CHECK(path_variation({{7.0}}) == 0.0);
  CHECK_THROWS_AS(path_variation({}), std::invalid_argument);
  CHECK_THROWS_AS(path_variation({{0.0}, {0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("path variation is invariant under reversal") {
  const CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vector> points;
    const std::size_t len = 2 + trial % 7;
    for (std::size_t t = 0; t < len; ++t) {
      points.push_back(Vector{
          rng.uniform(static_cast<std::uint64_t>(trial * 100 + 2 * t)),
          rng.uniform(static_cast<std::uint64_t>(trial * 100 + 2 * t + 1))});
    }
    std::vector<Vector> reversed(points.rbegin(), points.rend());
    CHECK(path_variation(points) == doctest::Approx(path_variation(reversed))
                                        .epsilon(1e-15));
  }
}

TEST_CASE("coordinate path variations") {
  const std::vector<Vector> points{{0.0, 0.0}, {1.0, -2.0}, {0.5, -2.0}};
  CHECK(coordinate_path_variations(points) == std::vector<double>{1.5, 2.0});
}

TEST_CASE("projection properties on random points") {
  const CounterRng rng(77);
  const FeasibleSet sets[] = {
      FeasibleSet::ball(Vector{0.5, -1.0, 2.0}, 1.5),
      FeasibleSet::box(Vector{-1.0, 0.0, -3.0}, Vector{1.0, 0.5, -1.0}),
  };
  for (const FeasibleSet& set : sets) {
    const double d = set.diameter();
    for (int trial = 0; trial < 200; ++trial) {
      const std::uint64_t base = static_cast<std::uint64_t>(trial) * 16;
      const Vector x = random_point_near(set, rng, base);
      const Vector y = random_point_near(set, rng, base + 8);
      const Vector px = set.project(x);
      const Vector py = set.project(y);

      CHECK(set.contains(px, 1e-12));
      // Idempotent, bit for bit.
      CHECK(set.project(px) == px);
      // Nonexpansive.
      CHECK(distance(px, py) <= distance(x, y) * (1.0 + 1e-12) + 1e-15);
      // Any two members are within the diameter.
      CHECK(distance(px, py) <= d + 1e-12);
    }
  }
}

TEST_CASE("set construction invariants") {
  CHECK_THROWS_AS(FeasibleSet::ball(Vector{0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::ball(Vector{0.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::box(Vector{1.0}, Vector{0.0}), std::invalid_argument);
  // All-degenerate box has no width anywhere.
  CHECK_THROWS_AS(FeasibleSet::box(Vector{1.0, 2.0}, Vector{1.0, 2.0}),
                  std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(FeasibleSet::ball(Vector{nan}, 1.0), std::invalid_argument);
}

TEST_CASE("linear minimizer closed forms") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  CHECK(interval.linear_minimizer(Vector{3.0}) == Vector{-1.0});
  CHECK(interval.linear_minimizer(Vector{-0.2}) == Vector{1.0});
  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  const Vector m = ball.linear_minimizer(Vector{3.0, 4.0});
  CHECK(m[0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(m[1] == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("comparator path validation") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const ComparatorPath ok =
      make_comparator_path(interval, {{0.0}, {1.0}, {0.5}}, 1.5);
  CHECK(ok.length() == 3);
  CHECK(ok.budget == 1.5);

  // Variation 1.5 exceeds budget 1.0.
  CHECK_THROWS_AS(make_comparator_path(interval, {{0.0}, {1.0}, {0.5}}, 1.0),
                  std::invalid_argument);
  // Point outside the set.
  CHECK_THROWS_AS(make_comparator_path(interval, {{2.0}}, 0.0),
                  std::invalid_argument);
  // Budget above D * (T - 1).
  CHECK_THROWS_AS(make_comparator_path(interval, {{0.0}, {0.0}}, 5.0),
                  std::invalid_argument);
  // Single point must carry a zero budget.
  CHECK_THROWS_AS(make_comparator_path(interval, {{0.0}}, 1.0),
                  std::invalid_argument);
  CHECK(make_comparator_path(interval, {{0.0}}, 0.0).budget == 0.0);
}
