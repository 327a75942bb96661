#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pogd/geometry.hpp"
#include "pogd/optimizer.hpp"
#include "pogd/scheduler.hpp"
#include "pogd/streams.hpp"

namespace pogd {

// Regret accounting for one recorded run against one comparator. Bound
// values are keyed by name ("adaptive", "constant", "rate_sequence",
// "doubling_sum", "doubling_max", "per_coordinate", "lower_sum",
// "lower_max"); violations flag upper bounds exceeded by the linearized
// regret beyond the relative tolerance.
struct RegretReport {
  std::optional<double> realized_dynamic_regret;
  double linearized_regret = 0.0;
  double final_energy = 0.0;  // G_T, recomputed from the records
  double max_grad_norm = 0.0;
  double path_variation = 0.0;
  std::int64_t horizon = 0;
  std::map<std::string, double> bounds;
  std::map<std::string, bool> violations;

  bool any_violation() const;
};

constexpr double kBoundTolerance = 1e-9;

/// True when value exceeds bound beyond the relative tolerance.
bool violates_bound(double value, double bound, double tolerance = kBoundTolerance);

/// Both regret sums; realized losses are re-evaluated through the stream at
/// the recorded decisions and the comparator points (function values only).
RegretReport dynamic_regret(const std::vector<StepRecord>& records,
                            const ComparatorPath& comparator,
                            const LossStream& stream);

/// Linearized regret sum_t g_t^T (w_t - w_t*) alone.
double linearized_regret(const std::vector<StepRecord>& records,
                         const ComparatorPath& comparator);

/// D^2 (P/D + 1/2) / eta_T + sum_{t >= t0} (eta_t / 2) |g_t|^2 for a
/// positive nonincreasing rate sequence; t0 is the first round with a
/// nonzero gradient. Throws PreconditionError when the rates increase.
double bound_rate_sequence(double diameter, double path_budget,
                      const std::vector<std::optional<double>>& rates,
                      const std::vector<double>& grad_norms);
double bound_rate_sequence(double diameter, double path_budget,
                      const std::vector<double>& rates,
                      const std::vector<double>& grad_norms);

/// D sqrt(1 + 2P/D) G_T (0 when G_T = 0).
double bound_constant(double diameter, double path_budget, double final_energy);

/// ((P/D + 1/2)/sqrt(Ph/D + 1/2) + sqrt(Ph/D + 1/2)) D G_T; collapses to
/// 2 D sqrt(P/D + 1/2) G_T when the hint matches the true budget.
double bound_adaptive(double diameter, double path_budget, double budget_hint,
                      double final_energy);

/// sum_i 2 D_i sqrt(P_i/D_i + 1/2) sqrt(sum_t g_{t,i}^2); zero-width
/// coordinates contribute 0.
double bound_per_coordinate(const std::vector<double>& coordinate_diameters,
                            const std::vector<double>& coordinate_budgets,
                            const std::vector<double>& coordinate_energies);

struct DoublingBounds {
  double sum_form = 0.0;
  double max_form = 0.0;
};

/// The two restart-schedule guarantees:
///   2 sqrt(2) sqrt(ceil(log2(T+1))) D sqrt(P(T)/D + 1/4) sqrt(sum |g_t|^2)
///   4 sqrt(2 + sqrt(2)) D sqrt(P(T)/D + 1/4) max|g_t| sqrt(T)
DoublingBounds bounds_doubling(double diameter, const PathBudgetFunction& budget,
                               std::int64_t horizon,
                               const std::vector<double>& grad_norms);

/// Worst-case adversarial floor D sqrt(floor(P/D) + 1) / (2 sqrt(2)) * G_T.
double lower_bound_sum(double diameter, double path_budget, double final_energy);

/// Same under a uniform gradient norm cap: D sqrt(floor(P/D)+1)/4 * L sqrt(T).
double lower_bound_max(double diameter, double path_budget, double max_grad_norm,
                       std::int64_t horizon);

/// Per-round distances |w_t - w_t*| (diagnostics).
std::vector<double> decision_comparator_distances(
    const std::vector<StepRecord>& records, const ComparatorPath& comparator);

/// Rates are positive and nonincreasing within each recorded segment once
/// the energy is positive.
bool rates_nonincreasing_within_segments(const std::vector<StepRecord>& records);

// Sum of gradient self outer products A_T = sum_t g_t g_t^T plus the scalar
// energy sum_t |g_t|^2, for the trace comparison below. Desk scale: N <= 64.
class GramAccumulator {
 public:
  explicit GramAccumulator(std::size_t dimension);

  void add(const Vector& g);

  std::size_t dimension() const { return dim_; }
  std::int64_t count() const { return count_; }
  const std::vector<double>& matrix() const { return matrix_; }
  double trace() const;
  double energy() const { return energy_; }

 private:
  std::size_t dim_;
  std::int64_t count_ = 0;
  std::vector<double> matrix_;  // row-major
  double energy_ = 0.0;
};

struct TraceInequalityResult {
  double lhs = 0.0;    // sqrt(sum_t |g_t|^2)
  double rhs = 0.0;    // tr(sqrt(A_T)) = sum_i sqrt(lambda_i)
  double ratio = 1.0;  // rhs / lhs, in [1, sqrt(N)]
};

TraceInequalityResult trace_inequality(const GramAccumulator& gram);

/// Eigenvalues of a symmetric matrix (row-major, N <= 64) by cyclic Jacobi
/// rotations to off(A) <= 1e-12 |A|_F, sorted ascending. Negatives within
/// -1e-10 * trace are clamped to zero.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& matrix,
                                          std::size_t n);

}  // namespace pogd
