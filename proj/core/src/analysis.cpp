#include "pogd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pogd/errors.hpp"

namespace pogd {

bool RegretReport::any_violation() const {
  for (const auto& [name, flag] : violations) {
    if (flag) return true;
  }
  return false;
}

bool violates_bound(double value, double bound, double tolerance) {
  return value > bound + tolerance * (1.0 + std::abs(bound));
}

double linearized_regret(const std::vector<StepRecord>& records,
                         const ComparatorPath& comparator) {
  if (records.size() != comparator.points.size()) {
    throw std::invalid_argument("regret: records/comparator length mismatch");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    const Vector& w = records[t].decision;
    const Vector& wstar = comparator.points[t];
    require_dimension(wstar, w.size(), "comparator point");
    for (std::size_t i = 0; i < w.size(); ++i) {
      total += records[t].gradient[i] * (w[i] - wstar[i]);
    }
  }
  return total;
}

RegretReport dynamic_regret(const std::vector<StepRecord>& records,
                            const ComparatorPath& comparator,
                            const LossStream& stream) {
  RegretReport report;
  report.linearized_regret = linearized_regret(records, comparator);
  report.horizon = static_cast<std::int64_t>(records.size());
  report.path_variation = path_variation(comparator.points);

  double sum_sq = 0.0;
  for (const StepRecord& rec : records) {
    const double g = norm(rec.gradient);
    sum_sq += g * g;
    report.max_grad_norm = std::max(report.max_grad_norm, g);
  }
  report.final_energy = std::sqrt(sum_sq);

  if (stream.has_loss_values()) {
    double realized = 0.0;
    for (std::size_t t = 0; t < records.size(); ++t) {
      const std::int64_t round = static_cast<std::int64_t>(t) + 1;
      realized += stream.loss(round, records[t].decision) -
                  stream.loss(round, comparator.points[t]);
    }
    report.realized_dynamic_regret = realized;
    // Convexity direction: realized regret never exceeds the linearized sum.
    report.violations["eq2_direction"] = violates_bound(
        realized, report.linearized_regret);
  }
  return report;
}

namespace {

std::vector<std::optional<double>> to_optional(const std::vector<double>& rates) {
  std::vector<std::optional<double>> out(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) out[i] = rates[i];
  return out;
}

}  // namespace

double bound_rate_sequence(double diameter, double path_budget,
                      const std::vector<std::optional<double>>& rates,
                      const std::vector<double>& grad_norms) {
  if (!(diameter > 0.0) || !(path_budget >= 0.0)) {
    throw std::invalid_argument("bound_rate_sequence: bad diameter or budget");
  }
  if (rates.size() != grad_norms.size()) {
    throw std::invalid_argument("bound_rate_sequence: rates/norms length mismatch");
  }
  std::size_t t0 = grad_norms.size();
  for (std::size_t t = 0; t < grad_norms.size(); ++t) {
    if (grad_norms[t] != 0.0) {
      t0 = t;
      break;
    }
  }
  if (t0 == grad_norms.size()) {
    // No nonzero gradient: zero regret; only the first term could apply.
    for (auto it = rates.rbegin(); it != rates.rend(); ++it) {
      if (it->has_value()) {
        return diameter * diameter * (path_budget / diameter + 0.5) / **it;
      }
    }
    return 0.0;
  }

  double last = 0.0;
  bool have_last = false;
  double sum_term = 0.0;
  for (std::size_t t = t0; t < grad_norms.size(); ++t) {
    if (!rates[t].has_value()) {
      throw std::invalid_argument("bound_rate_sequence: missing rate after t0");
    }
    const double eta = *rates[t];
    if (!(eta > 0.0)) {
      throw PreconditionError("bound_rate_sequence: rates must be positive");
    }
    if (have_last && eta > last) {
      throw PreconditionError("bound_rate_sequence: rates must be nonincreasing");
    }
    last = eta;
    have_last = true;
    sum_term += 0.5 * eta * grad_norms[t] * grad_norms[t];
  }
  return diameter * diameter * (path_budget / diameter + 0.5) / last + sum_term;
}

double bound_rate_sequence(double diameter, double path_budget,
                      const std::vector<double>& rates,
                      const std::vector<double>& grad_norms) {
  return bound_rate_sequence(diameter, path_budget, to_optional(rates), grad_norms);
}

double bound_constant(double diameter, double path_budget, double final_energy) {
  if (final_energy == 0.0) return 0.0;
  return diameter * std::sqrt(1.0 + 2.0 * path_budget / diameter) * final_energy;
}

double bound_adaptive(double diameter, double path_budget, double budget_hint,
                      double final_energy) {
  if (!(diameter > 0.0) || !(path_budget >= 0.0) || !(budget_hint >= 0.0)) {
    throw std::invalid_argument("bound_adaptive: bad arguments");
  }
  if (budget_hint == path_budget) {
    return 2.0 * diameter * std::sqrt(path_budget / diameter + 0.5) * final_energy;
  }
  const double hint_term = std::sqrt(budget_hint / diameter + 0.5);
  return ((path_budget / diameter + 0.5) / hint_term + hint_term) * diameter *
         final_energy;
}

double bound_per_coordinate(const std::vector<double>& coordinate_diameters,
                            const std::vector<double>& coordinate_budgets,
                            const std::vector<double>& coordinate_energies) {
  const std::size_t n = coordinate_diameters.size();
  if (coordinate_budgets.size() != n || coordinate_energies.size() != n) {
    throw std::invalid_argument("bound_per_coordinate: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (coordinate_diameters[i] == 0.0) continue;  // pinned coordinate
    total += 2.0 * coordinate_diameters[i] *
             std::sqrt(coordinate_budgets[i] / coordinate_diameters[i] + 0.5) *
             coordinate_energies[i];
  }
  return total;
}

DoublingBounds bounds_doubling(double diameter, const PathBudgetFunction& budget,
                               std::int64_t horizon,
                               const std::vector<double>& grad_norms) {
  if (horizon < 1) throw std::invalid_argument("bounds_doubling: horizon >= 1");
  if (static_cast<std::int64_t>(grad_norms.size()) != horizon) {
    throw std::invalid_argument("bounds_doubling: norms length mismatch");
  }
  double sum_sq = 0.0;
  double max_norm = 0.0;
  for (double g : grad_norms) {
    sum_sq += g * g;
    max_norm = std::max(max_norm, g);
  }
  const double p_horizon = budget(horizon);
  const double budget_term = std::sqrt(p_horizon / diameter + 0.25);
  const double segments =
      std::ceil(std::log2(static_cast<double>(horizon) + 1.0));
  DoublingBounds out;
  out.sum_form = 2.0 * std::sqrt(2.0) * std::sqrt(segments) * diameter *
                 budget_term * std::sqrt(sum_sq);
  out.max_form = 4.0 * std::sqrt(2.0 + std::sqrt(2.0)) * diameter * budget_term *
                 max_norm * std::sqrt(static_cast<double>(horizon));
  return out;
}

double lower_bound_sum(double diameter, double path_budget, double final_energy) {
  const double pieces = std::floor(path_budget / diameter) + 1.0;
  return diameter * std::sqrt(pieces) / (2.0 * std::sqrt(2.0)) * final_energy;
}

double lower_bound_max(double diameter, double path_budget, double max_grad_norm,
                       std::int64_t horizon) {
  const double pieces = std::floor(path_budget / diameter) + 1.0;
  return diameter * std::sqrt(pieces) / 4.0 * max_grad_norm *
         std::sqrt(static_cast<double>(horizon));
}

std::vector<double> decision_comparator_distances(
    const std::vector<StepRecord>& records, const ComparatorPath& comparator) {
  if (records.size() != comparator.points.size()) {
    throw std::invalid_argument("distances: length mismatch");
  }
  std::vector<double> out(records.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    out[t] = distance(records[t].decision, comparator.points[t]);
  }
  return out;
}

bool rates_nonincreasing_within_segments(const std::vector<StepRecord>& records) {
  double last = 0.0;
  bool have_last = false;
  int segment = 0;
  for (const StepRecord& rec : records) {
    if (rec.segment != segment) {
      segment = rec.segment;
      have_last = false;
    }
    if (!rec.eta.has_value()) continue;
    if (!(*rec.eta > 0.0)) return false;
    if (have_last && *rec.eta > last * (1.0 + 1e-12)) return false;
    last = *rec.eta;
    have_last = true;
  }
  return true;
}

GramAccumulator::GramAccumulator(std::size_t dimension) : dim_(dimension) {
  if (dimension == 0 || dimension > 64) {
    throw std::invalid_argument("gram accumulator: dimension must be in 1..64");
  }
  matrix_.assign(dimension * dimension, 0.0);
}

void GramAccumulator::add(const Vector& g) {
  require_dimension(g, dim_, "gram gradient");
  require_finite(g, "gram gradient");
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      matrix_[i * dim_ + j] += g[i] * g[j];
    }
  }
  energy_ += dot(g, g);
  ++count_;
}

double GramAccumulator::trace() const {
  double tr = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) tr += matrix_[i * dim_ + i];
  return tr;
}

TraceInequalityResult trace_inequality(const GramAccumulator& gram) {
  TraceInequalityResult out;
  out.lhs = std::sqrt(gram.energy());
  const std::vector<double> eig =
      symmetric_eigenvalues(gram.matrix(), gram.dimension());
  // Eigenvalues below 1e-14 * trace are numerical rank noise; taking their
  // square roots would inflate the trace side, so they count as zero.
  const double floor_level = 1e-14 * std::max(gram.trace(), 0.0);
  double rhs = 0.0;
  for (double lambda : eig) {
    if (lambda > floor_level) rhs += std::sqrt(lambda);
  }
  out.rhs = rhs;
  out.ratio = out.lhs > 0.0 ? out.rhs / out.lhs : 1.0;
  return out;
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& matrix,
                                          std::size_t n) {
  if (n == 0 || n > 64) {
    throw std::invalid_argument("symmetric_eigenvalues: dimension in 1..64");
  }
  if (matrix.size() != n * n) {
    throw std::invalid_argument("symmetric_eigenvalues: matrix size mismatch");
  }
  double scale = 0.0;
  for (double x : matrix) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("symmetric_eigenvalues: non-finite entry");
    }
    scale = std::max(scale, std::abs(x));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(matrix[i * n + j] - matrix[j * n + i]) >
          1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric");
      }
    }
  }

  std::vector<double> a = matrix;
  // Exact symmetry for the rotations.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a[i * n + j] + a[j * n + i]);
      a[i * n + j] = v;
      a[j * n + i] = v;
    }
  }

  double fro_sq = 0.0;
  for (double x : a) fro_sq += x * x;
  const double threshold = 1e-12 * std::sqrt(fro_sq);

  const auto off_diagonal = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a[i * n + j] * a[i * n + j];
      }
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 64;
  bool converged = off_diagonal() <= threshold;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        // Annihilate (p, q) with the stable rotation.
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[p * n + i] = a[i * n + p];
          a[i * n + q] = s * aip + c * aiq;
          a[q * n + i] = a[i * n + q];
        }
      }
    }
    converged = off_diagonal() <= threshold;
  }
  if (!converged) {
    std::ostringstream os;
    os << "symmetric_eigenvalues: no convergence after " << kMaxSweeps
       << " sweeps, off-diagonal residual " << off_diagonal();
    throw NumericalFailureError(os.str());
  }

  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += matrix[i * n + i];
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lambda = a[i * n + i];
    if (lambda < 0.0 && lambda >= -1e-10 * std::max(tr, 0.0)) lambda = 0.0;
    eig[i] = lambda;
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace pogd
