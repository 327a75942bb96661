#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "pogd/errors.hpp"
#include "pogd/rng.hpp"
#include "pogd/scheduler.hpp"
#include "pogd/streams.hpp"

using namespace pogd;

namespace {

// Exhaustive minimum of sum_t g_t^T p_t over grid paths with variation <= budget.
double enumerate_min_cost(const std::vector<Vector>& grid,
                          const std::vector<Vector>& grads, double budget) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(grads.size(), 0);
  std::function<void(std::size_t, double, double)> walk =
      [&](std::size_t t, double used, double cost) {
        if (t == grads.size()) {
          best = std::min(best, cost);
          return;
        }
        for (std::size_t p = 0; p < grid.size(); ++p) {
          double next_used = used;
          if (t > 0) next_used += distance(grid[choice[t - 1]], grid[p]);
          if (next_used > budget + 1e-12) continue;
          choice[t] = p;
          walk(t + 1, next_used, cost + dot(grads[t], grid[p]));
        }
      };
  walk(0, 0.0, 0.0);
  return best;
}

std::vector<Vector> make_axis_grid(double lo, double hi, std::size_t res) {
  std::vector<Vector> grid;
  for (std::size_t a = 0; a < res; ++a) {
    grid.push_back(Vector{lo + static_cast<double>(a) * (hi - lo) /
                                   static_cast<double>(res - 1)});
  }
  return grid;
}

// Independent check for the 1-D search: dynamic program over
// (grid point, remaining whole-cell budget) states.
double dp_cell_budget_min_cost(const std::vector<Vector>& grid,
                               const std::vector<Vector>& grads,
                               std::int64_t budget_cells, double cell) {
  const std::size_t m = grid.size();
  std::vector<std::vector<double>> value(
      m, std::vector<double>(static_cast<std::size_t>(budget_cells) + 1, 0.0));
  for (std::size_t p = 0; p < m; ++p) {
    for (std::int64_t b = 0; b <= budget_cells; ++b) {
      value[p][static_cast<std::size_t>(b)] = dot(grads.back(), grid[p]);
    }
  }
  for (std::size_t back = 1; back < grads.size(); ++back) {
    const Vector& g = grads[grads.size() - 1 - back];
    std::vector<std::vector<double>> next(
        m, std::vector<double>(static_cast<std::size_t>(budget_cells) + 1));
    for (std::size_t p = 0; p < m; ++p) {
      for (std::int64_t b = 0; b <= budget_cells; ++b) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < m; ++q) {
          const std::int64_t hop = static_cast<std::int64_t>(
              std::llround(distance(grid[p], grid[q]) / cell));
          if (hop > b) continue;
          best = std::min(best,
                         value[q][static_cast<std::size_t>(b - hop)]);
        }
        next[p][static_cast<std::size_t>(b)] = dot(g, grid[p]) + best;
      }
    }
    value = std::move(next);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < m; ++p) {
    best = std::min(best, value[p][static_cast<std::size_t>(budget_cells)]);
  }
  return best;
}

double comparator_cost(const std::vector<Vector>& grads,
                       const std::vector<Vector>& points) {
  double cost = 0.0;
  for (std::size_t t = 0; t < grads.size(); ++t) {
    cost += dot(grads[t], points[t]);
  }
  return cost;
}

std::vector<Vector> random_gradients(const CounterRng& rng, std::size_t n,
                                     std::size_t horizon, double scale) {
  std::vector<Vector> grads(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    Vector g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = scale * (2.0 * rng.uniform(t * n + i) - 1.0);
    }
    grads[t] = std::move(g);
  }
  return grads;
}

}  // namespace

TEST_CASE("rademacher streams have exact energy and reproducible signs") {
  RademacherStream a = gen_rademacher(Vector{1.0}, 1.0, 4, 9001);
  RademacherStream b = gen_rademacher(Vector{1.0}, 1.0, 4, 9001);
  CHECK(a.signs() == b.signs());

  GradientEnergy e;
  const Vector w{0.0};
  for (std::int64_t t = 1; t <= 4; ++t) {
    const Vector g = a.gradient_at(t, w);
    CHECK(norm(g) == 1.0);
    e = update_energy(e, g);
  }
  CHECK(e.total() == 2.0);  // sqrt(4 * 1)

  // Random direction: energy still L * sqrt(T) up to normalization rounding.
  RademacherStream c = gen_rademacher(Vector{0.3, -0.7, 0.1}, 2.5, 64, 42);
  GradientEnergy e2;
  const Vector w3{0.0, 0.0, 0.0};
  for (std::int64_t t = 1; t <= 64; ++t) e2 = update_energy(e2, c.gradient_at(t, w3));
  CHECK(e2.total() == doctest::Approx(2.5 * 8.0).epsilon(1e-12));
}

TEST_CASE("rademacher signs are fair") {
  RademacherStream s = gen_rademacher(Vector{1.0}, 1.0, 100000, 7171);
  double sum = 0.0;
  for (double sigma : s.signs()) {
    REQUIRE((sigma == 1.0 || sigma == -1.0));
    sum += sigma;
  }
  CHECK(std::abs(sum) / 100000.0 <= 0.02);
}

TEST_CASE("streams reveal one gradient per round in order") {
  RademacherStream s = gen_rademacher(Vector{1.0}, 1.0, 3, 1);
  const Vector w{0.0};
  CHECK_NOTHROW(s.gradient_at(1, w));
  CHECK_THROWS_AS(s.gradient_at(1, w), std::logic_error);  // re-query rejected
  CHECK_THROWS_AS(s.gradient_at(3, w), std::logic_error);  // skipping rejected
  CHECK_NOTHROW(s.gradient_at(2, w));
  s.reset();
  CHECK_NOTHROW(s.gradient_at(1, w));
  CHECK_THROWS_AS(s.gradient_at(4, w), std::out_of_range);
  // Loss values remain freely evaluable.
  CHECK(s.loss(1, Vector{1.0}) == s.sign_at(1));
}

TEST_CASE("absolute regression sub-gradients") {
  AbsoluteRegressionStream s({{2.0}, {2.0}, {2.0}}, {1.0, 1.0, 1.0});
  // Above the target: +x.
  CHECK(s.gradient_at(1, Vector{1.0}) == Vector{2.0});
  // Below: -x.
  CHECK(s.gradient_at(2, Vector{0.0}) == Vector{-2.0});
  // At the kink: zero sub-gradient.
  CHECK(s.gradient_at(3, Vector{0.5}) == Vector{0.0});
  CHECK(s.loss(1, Vector{0.5}) == 0.0);
}

TEST_CASE("revealed gradients satisfy the sub-gradient inequality") {
  const FeasibleSet set = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  RegressionInstance gen = gen_regression(set, 40, 0.05, 0.2, 4242);
  const CounterRng rng(11);
  for (std::int64_t t = 1; t <= 40; ++t) {
    Vector w{2.0 * rng.uniform(4 * t) - 1.0, 2.0 * rng.uniform(4 * t + 1) - 1.0};
    w = set.project(w);
    const Vector g = gen.stream.gradient_at(t, w);
    Vector v{2.0 * rng.uniform(4 * t + 2) - 1.0,
             2.0 * rng.uniform(4 * t + 3) - 1.0};
    v = set.project(v);
    Vector diff{w[0] - v[0], w[1] - v[1]};
    CHECK(gen.stream.loss(t, w) - gen.stream.loss(t, v) <=
          dot(g, diff) + 1e-12);
  }
}

TEST_CASE("regression ground truth respects its budget") {
  const FeasibleSet set = FeasibleSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});
  SUBCASE("static truth has zero variation") {
    RegressionInstance gen = gen_regression(set, 50, 0.0, 0.1, 7);
    CHECK(path_variation(gen.ground_truth.points) == 0.0);
    CHECK(gen.ground_truth.budget == 0.0);
  }
  SUBCASE("drifting truth stays within the measured budget") {
    RegressionInstance gen = gen_regression(set, 50, 0.1, 0.0, 7);
    const double variation = path_variation(gen.ground_truth.points);
    CHECK(variation <= gen.ground_truth.budget + 1e-12);
    CHECK(variation > 0.0);
    // Hops are capped by the drift rate.
    for (std::size_t t = 1; t < gen.ground_truth.points.size(); ++t) {
      CHECK(distance(gen.ground_truth.points[t], gen.ground_truth.points[t - 1]) <=
            0.1 + 1e-12);
    }
  }
  SUBCASE("noiseless static truth yields zero loss at the truth") {
    RegressionInstance gen = gen_regression(set, 20, 0.0, 0.0, 7);
    for (std::int64_t t = 1; t <= 20; ++t) {
      CHECK(gen.stream.loss(t, gen.ground_truth.points[static_cast<std::size_t>(
                t - 1)]) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero prefix stream defers to the inner stream") {
  auto inner = std::make_unique<RademacherStream>(
      gen_rademacher(Vector{1.0}, 1.0, 5, 3));
  const std::vector<double> inner_signs = inner->signs();
  ZeroPrefixStream s(3, std::move(inner));
  CHECK(s.horizon() == 8);
  const Vector w{0.0};
  for (std::int64_t t = 1; t <= 3; ++t) {
    CHECK(s.gradient_at(t, w) == Vector{0.0});
    CHECK(s.loss(t, w) == 0.0);
  }
  CHECK(s.gradient_at(4, w) == Vector{inner_signs[0]});
  s.reset();
  CHECK(s.gradient_at(1, w) == Vector{0.0});
}

TEST_CASE("best segmented comparator closed forms") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const std::vector<Vector> grads{{1.0}, {1.0}, {1.0}};
  const SegmentedComparator one =
      best_segmented_comparator(grads, interval, 0.0, 1);
  CHECK(one.segment_points == std::vector<Vector>{{-1.0}});

  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  const SegmentedComparator antipodal =
      best_segmented_comparator({{3.0, 4.0}}, ball, 0.0, 1);
  CHECK(antipodal.segment_points[0][0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(antipodal.segment_points[0][1] == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("best segmented comparator matches an exhaustive grid search") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const std::vector<Vector> grads{{0.7}, {-0.3}, {0.4}, {-1.2}};
  const SegmentedComparator lib =
      best_segmented_comparator(grads, interval, 2.0, 2);
  const ComparatorPath path = lib.expand(interval, 2.0);

  // 41-point grid per segment, unconstrained pair search (budget D covers
  // any single hop).
  const std::vector<Vector> grid = make_axis_grid(-1.0, 1.0, 41);
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& w1 : grid) {
    for (const Vector& w2 : grid) {
      const double cost = (grads[0][0] + grads[1][0]) * w1[0] +
                          (grads[2][0] + grads[3][0]) * w2[0];
      best = std::min(best, cost);
    }
  }
  CHECK(comparator_cost(grads, path.points) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("best segmented comparator dominates same-segmentation rivals") {
  const FeasibleSet ball = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  const CounterRng rng(88);
  const std::vector<Vector> grads = random_gradients(rng.substream(1), 2, 12, 1.0);
  const double budget = 2.0 * ball.diameter();
  const SegmentedComparator lib =
      best_segmented_comparator(grads, ball, budget, 3);
  const double lib_cost =
      comparator_cost(grads, lib.expand(ball, budget).points);

  const CounterRng rival_rng = rng.substream(2);
  for (int trial = 0; trial < 50; ++trial) {
    SegmentedComparator rival = lib;
    for (std::size_t k = 0; k < rival.segment_points.size(); ++k) {
      Vector p{2.0 * rival_rng.uniform(trial * 8 + 2 * k) - 1.0,
               2.0 * rival_rng.uniform(trial * 8 + 2 * k + 1) - 1.0};
      rival.segment_points[k] = ball.project(p);
    }
    const double rival_cost =
        comparator_cost(grads, rival.expand(ball, budget).points);
    CHECK(lib_cost <= rival_cost + 1e-12);
  }
}

TEST_CASE("segment count beyond the budget is infeasible") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const std::vector<Vector> grads{{1.0}, {1.0}, {1.0}, {1.0}};
  // floor(P/D) + 1 = 1 segment allowed at P = 0.
  CHECK_THROWS_AS(best_segmented_comparator(grads, interval, 0.0, 2),
                  InfeasibleError);
  // More segments than rounds.
  CHECK_THROWS_AS(best_segmented_comparator({{1.0}}, interval, 10.0, 2),
                  InfeasibleError);
  CHECK_NOTHROW(best_segmented_comparator(grads, interval, 2.0, 2));
}

TEST_CASE("brute force with zero budget finds the best fixed grid point") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const CounterRng rng(5150);
  const std::vector<Vector> grads = random_gradients(rng, 1, 6, 1.0);
  const ComparatorPath path = brute_force_comparator(grads, interval, 0.0, 21);

  double gsum = 0.0;
  for (const Vector& g : grads) gsum += g[0];
  const std::vector<Vector> grid = make_axis_grid(-1.0, 1.0, 21);
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& p : grid) best = std::min(best, gsum * p[0]);

  for (const Vector& p : path.points) CHECK(p == path.points.front());
  CHECK(comparator_cost(grads, path.points) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("brute force with a saturated budget picks per-round minimizers") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const CounterRng rng(626);
  const std::vector<Vector> grads = random_gradients(rng, 1, 5, 1.0);
  const double budget = interval.diameter() * 4.0;  // D * (T - 1)
  const ComparatorPath path = brute_force_comparator(grads, interval, budget, 21);

  const std::vector<Vector> grid = make_axis_grid(-1.0, 1.0, 21);
  double best = 0.0;
  for (const Vector& g : grads) {
    double round_best = std::numeric_limits<double>::infinity();
    for (const Vector& p : grid) round_best = std::min(round_best, g[0] * p[0]);
    best += round_best;
  }
  CHECK(comparator_cost(grads, path.points) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("brute force equals exhaustive search on an exact 1-D grid") {
  // Grid spacing 0.25 is exact in binary, and the budget is a multiple of
  // it, so the cell slack cannot admit any extra path.
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const CounterRng rng(99);
  const std::vector<Vector> grads = random_gradients(rng, 1, 4, 1.2);
  const std::vector<Vector> grid = make_axis_grid(-1.0, 1.0, 9);

  const ComparatorPath path = brute_force_comparator(grads, interval, 0.5, 9);
  const double exhaustive = enumerate_min_cost(grid, grads, 0.5);
  CHECK(comparator_cost(grads, path.points) ==
        doctest::Approx(exhaustive).epsilon(1e-12));
  CHECK(path_variation(path.points) <= 0.5 + 1e-12);
}

TEST_CASE("brute force matches the cell-budget dynamic program") {
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const CounterRng rng(4096);
  const std::vector<Vector> grads = random_gradients(rng, 1, 4, 1.0);
  const std::vector<Vector> grid = make_axis_grid(-1.0, 1.0, 9);
  const double cell = 0.25;

  const ComparatorPath path = brute_force_comparator(grads, interval, 1.0, 9);
  const double dp = dp_cell_budget_min_cost(grid, grads, 4, cell);
  CHECK(comparator_cost(grads, path.points) == doctest::Approx(dp).epsilon(1e-12));
}

TEST_CASE("brute force is sandwiched by exact enumerations in 2-D") {
  const FeasibleSet box = FeasibleSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});
  const CounterRng rng(2020);
  const std::vector<Vector> grads = random_gradients(rng, 2, 3, 1.0);
  const std::size_t res = 5;
  std::vector<Vector> grid;
  for (std::size_t a = 0; a < res; ++a) {
    for (std::size_t b = 0; b < res; ++b) {
      grid.push_back(Vector{-1.0 + 0.5 * static_cast<double>(a),
                            -1.0 + 0.5 * static_cast<double>(b)});
    }
  }
  const double budget = 0.8;
  const double cell_diag = std::sqrt(2.0) * 0.5;
  const ComparatorPath path = brute_force_comparator(grads, box, budget, res);
  const double cost = comparator_cost(grads, path.points);
  CHECK(cost <= enumerate_min_cost(grid, grads, budget) + 1e-12);
  CHECK(cost >= enumerate_min_cost(grid, grads, budget + cell_diag) - 1e-12);
  CHECK(path_variation(path.points) <= budget + cell_diag + 1e-12);
}

TEST_CASE("brute force enforces its desk-scale limits") {
  const FeasibleSet box =
      FeasibleSet::box(Vector{-1.0, -1.0, -1.0}, Vector{1.0, 1.0, 1.0});
  CHECK_THROWS_AS(brute_force_comparator({{0.0, 0.0, 0.0}}, box, 0.0, 5),
                  SizeLimitError);
  const FeasibleSet interval = FeasibleSet::box(Vector{-1.0}, Vector{1.0});
  const std::vector<Vector> nine(9, Vector{1.0});
  CHECK_THROWS_AS(brute_force_comparator(nine, interval, 0.0, 5), SizeLimitError);
  CHECK_THROWS_AS(brute_force_comparator({{1.0}}, interval, 0.0, 22),
                  SizeLimitError);
}
