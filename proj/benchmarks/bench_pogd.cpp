#include <benchmark/benchmark.h>

#include "pogd/analysis.hpp"
#include "pogd/optimizer.hpp"
#include "pogd/rng.hpp"
#include "pogd/streams.hpp"

namespace {

using namespace pogd;

Vector unit_direction(std::size_t n) {
  const CounterRng rng(12);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal(i);
  const double len = norm(v);
  for (double& x : v) x /= len;
  return v;
}

void BM_ProjectBall(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FeasibleSet set = FeasibleSet::ball(Vector(n, 0.0), 1.0);
  Vector p(n, 0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(set.project(p));
  }
}
BENCHMARK(BM_ProjectBall)->Arg(2)->Arg(8)->Arg(64);

void BM_ProjectBox(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FeasibleSet set = FeasibleSet::box(Vector(n, -1.0), Vector(n, 1.0));
  Vector p(n, 1.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(set.project(p));
  }
}
BENCHMARK(BM_ProjectBox)->Arg(2)->Arg(8)->Arg(64);

void BM_AdaptiveStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FeasibleSet set = FeasibleSet::ball(Vector(n, 0.0), 1.0);
  Engine engine(set, AdaptivePolicy{1.0}, set.midpoint());
  const Vector g = unit_direction(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.observe(g));
  }
}
BENCHMARK(BM_AdaptiveStep)->Arg(2)->Arg(16);

void BM_PerCoordinateStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const FeasibleSet set = FeasibleSet::box(Vector(n, -1.0), Vector(n, 1.0));
  Engine engine(set, PerCoordinatePolicy{std::vector<double>(n, 0.5)},
                set.midpoint());
  const Vector g = unit_direction(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.observe(g));
  }
}
BENCHMARK(BM_PerCoordinateStep)->Arg(2)->Arg(16);

void BM_RademacherRun(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const FeasibleSet set = FeasibleSet::ball(Vector{0.0, 0.0}, 1.0);
  for (auto _ : state) {
    RademacherStream stream =
        gen_rademacher(Vector{0.6, -0.8}, 1.0, horizon, 77);
    benchmark::DoNotOptimize(
        run(stream, set, set.midpoint(), AdaptivePolicy{1.0}, horizon));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_RademacherRun)->Arg(1024)->Arg(4096);

void BM_JacobiEigenvalues(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const CounterRng rng(9);
  GramAccumulator gram(n);
  for (std::size_t t = 0; t < 4 * n; ++t) {
    Vector g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = rng.normal(t * n + i);
    gram.add(g);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetric_eigenvalues(gram.matrix(), n));
  }
}
BENCHMARK(BM_JacobiEigenvalues)->Arg(8)->Arg(32);

void BM_BruteForceComparator(benchmark::State& state) {
  const CounterRng rng(41);
  std::vector<Vector> grads(6);
  for (std::size_t t = 0; t < grads.size(); ++t) {
    grads[t] = Vector{2.0 * rng.uniform(2 * t) - 1.0,
                      2.0 * rng.uniform(2 * t + 1) - 1.0};
  }
  const FeasibleSet set = FeasibleSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});
  const double budget = 0.5 * set.diameter();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        brute_force_comparator(grads, set, budget, static_cast<std::size_t>(
                                                       state.range(0))));
  }
}
BENCHMARK(BM_BruteForceComparator)->Arg(11)->Arg(21);

}  // namespace

BENCHMARK_MAIN();
