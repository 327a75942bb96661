#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pogd/geometry.hpp"

namespace pogd {

// Running root-sum-of-squares of observed sub-gradient norms,
// G_t = sqrt(G_{t-1}^2 + |g_t|^2), stored as the exact sum of squares.
// Per-coordinate tracking is optional and used by the per-coordinate rates.
struct GradientEnergy {
  double sum_sq = 0.0;
  std::vector<double> coordinate_sum_sq;

  static GradientEnergy scalar() { return {}; }
  static GradientEnergy with_coordinates(std::size_t n) {
    GradientEnergy e;
    e.coordinate_sum_sq.assign(n, 0.0);
    return e;
  }

  double total() const;
  std::vector<double> coordinate_totals() const;
};

GradientEnergy update_energy(const GradientEnergy& energy, const Vector& g);

/// Best constant rate in hindsight: D * sqrt(1 + 2P/D) / G_T.
/// Throws OracleUndefinedError when final_energy is 0 (no rate is needed;
/// a gradient-free run incurs zero regret).
double rate_constant_oracle(double diameter, double path_budget,
                            double final_energy);

/// Online rate from past information only: D * sqrt(P_hat/D + 1/2) / G_t.
/// Throws RateUndefinedError when energy is 0 (still in the zero-gradient
/// prefix, where the engine skips updates).
double rate_adaptive(double diameter, double budget_hint, double energy);

/// Coordinate-wise rates; nullopt marks a dormant coordinate (its energy is
/// still zero, so it receives no update). A zero-width coordinate is pinned
/// with rate 0.
std::vector<std::optional<double>> rate_per_coordinate(
    const std::vector<double>& coordinate_diameters,
    const std::vector<double>& budget_hints,
    const std::vector<double>& coordinate_energies);

// Nondecreasing envelope T -> P(T) for comparator variation that grows with
// the horizon. Construction validates, over T and all pairs T1, T2 in
// {1..1024}:
//   P(T) <= D * (T - 1),   P nondecreasing,
//   P(T1 + T2) <= P(T1) + P(T2 + 1)   (almost sub-additive).
class PathBudgetFunction {
 public:
  static PathBudgetFunction constant(double p, double diameter);
  static PathBudgetFunction sqrt_growth(double c, double diameter);
  static PathBudgetFunction linear_growth(double c, double diameter);
  static PathBudgetFunction custom(std::string name,
                                   std::function<double(std::int64_t)> fn,
                                   double diameter);

  double operator()(std::int64_t horizon) const;
  double diameter() const;
  const std::string& name() const;

 private:
  struct Impl;
  explicit PathBudgetFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Segment k covers rounds 2^{k-1} <= t < 2^k; the energy accumulator is
// reset at every segment start.
struct DoublingSegment {
  int index = 1;               // k, 1-based
  std::int64_t start = 1;      // 2^{k-1}
  std::int64_t next_start = 2; // 2^k
};

DoublingSegment doubling_segment(std::int64_t round);

/// Budget pinned for segment k: P(2^k - 1).
double doubling_segment_budget(const PathBudgetFunction& budget, int segment_index);

struct ConstantOraclePolicy {
  double path_budget = 0.0;
  double final_energy = 0.0;  // must be > 0
};

struct AdaptivePolicy {
  double budget_hint = 0.0;  // P_hat
};

struct PerCoordinatePolicy {
  std::vector<double> budget_hints;  // P_hat_i
};

struct DoublingResetPolicy {
  PathBudgetFunction budget;
  bool reset_decision = false;  // also restart from the initial decision
};

using RatePolicy = std::variant<ConstantOraclePolicy, AdaptivePolicy,
                                PerCoordinatePolicy, DoublingResetPolicy>;

}  // namespace pogd
