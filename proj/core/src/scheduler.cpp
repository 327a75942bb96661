#include "pogd/scheduler.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "pogd/errors.hpp"

namespace pogd {

double GradientEnergy::total() const { return std::sqrt(sum_sq); }

std::vector<double> GradientEnergy::coordinate_totals() const {
  std::vector<double> out(coordinate_sum_sq.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::sqrt(coordinate_sum_sq[i]);
  }
  return out;
}

GradientEnergy update_energy(const GradientEnergy& energy, const Vector& g) {
  require_finite(g, "gradient");
  GradientEnergy out = energy;
  out.sum_sq = energy.sum_sq + dot(g, g);
  if (!energy.coordinate_sum_sq.empty()) {
    require_dimension(g, energy.coordinate_sum_sq.size(), "gradient");
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.coordinate_sum_sq[i] = energy.coordinate_sum_sq[i] + g[i] * g[i];
    }
  }
  return out;
}

namespace {

void check_rate_inputs(double diameter, double budget, double energy,
                       const char* what) {
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw std::invalid_argument(std::string(what) + ": diameter must be > 0");
  }
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument(std::string(what) + ": budget must be >= 0");
  }
  if (!(energy >= 0.0) || !std::isfinite(energy)) {
    throw std::invalid_argument(std::string(what) + ": energy must be >= 0");
  }
}

}  // namespace

double rate_constant_oracle(double diameter, double path_budget,
                            double final_energy) {
  check_rate_inputs(diameter, path_budget, final_energy, "rate_constant_oracle");
  if (final_energy == 0.0) {
    throw OracleUndefinedError(
        "rate_constant_oracle: G_T = 0, no rate needed (zero regret)");
  }
  return diameter * std::sqrt(1.0 + 2.0 * path_budget / diameter) / final_energy;
}

double rate_adaptive(double diameter, double budget_hint, double energy) {
  check_rate_inputs(diameter, budget_hint, energy, "rate_adaptive");
  if (energy == 0.0) {
    throw RateUndefinedError("rate_adaptive: G_t = 0 (zero-gradient prefix)");
  }
  return diameter * std::sqrt(budget_hint / diameter + 0.5) / energy;
}

std::vector<std::optional<double>> rate_per_coordinate(
    const std::vector<double>& coordinate_diameters,
    const std::vector<double>& budget_hints,
    const std::vector<double>& coordinate_energies) {
  const std::size_t n = coordinate_diameters.size();
  if (budget_hints.size() != n || coordinate_energies.size() != n) {
    throw std::invalid_argument("rate_per_coordinate: dimension mismatch");
  }
  std::vector<std::optional<double>> rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (coordinate_energies[i] == 0.0) {
      rates[i] = std::nullopt;  // dormant
      continue;
    }
    if (coordinate_diameters[i] == 0.0) {
      rates[i] = 0.0;  // pinned coordinate
      continue;
    }
    rates[i] = rate_adaptive(coordinate_diameters[i], budget_hints[i],
                             coordinate_energies[i]);
  }
  return rates;
}

struct PathBudgetFunction::Impl {
  std::string name;
  std::function<double(std::int64_t)> fn;
  double diameter = 0.0;
};

PathBudgetFunction::PathBudgetFunction(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

namespace {

constexpr std::int64_t kValidationGrid = 1024;

void validate_budget_function(const std::string& name,
                              const std::function<double(std::int64_t)>& fn,
                              double diameter) {
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw std::invalid_argument("path budget '" + name +
                                "': diameter must be > 0");
  }
  std::vector<double> values(static_cast<std::size_t>(2 * kValidationGrid) + 1);
  double prev = 0.0;
  for (std::int64_t t = 1; t <= 2 * kValidationGrid; ++t) {
    const double p = fn(t);
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream os;
      os << "path budget '" << name << "': P(" << t << ") is invalid";
      throw std::invalid_argument(os.str());
    }
    const double cap = diameter * static_cast<double>(t - 1);
    if (p > cap + 1e-9 * (1.0 + cap)) {
      std::ostringstream os;
      os << "path budget '" << name << "': P(" << t << ") exceeds D*(T-1)";
      throw std::invalid_argument(os.str());
    }
    if (t > 1 && p < prev - 1e-9 * (1.0 + prev)) {
      std::ostringstream os;
      os << "path budget '" << name << "': decreasing at T=" << t;
      throw std::invalid_argument(os.str());
    }
    values[static_cast<std::size_t>(t)] = p;
    prev = p;
  }
  // Almost sub-additive: P(T1 + T2) <= P(T1) + P(T2 + 1).
  for (std::int64_t t1 = 1; t1 <= kValidationGrid; ++t1) {
    for (std::int64_t t2 = 1; t2 <= kValidationGrid; ++t2) {
      const double lhs = values[static_cast<std::size_t>(t1 + t2)];
      const double rhs = values[static_cast<std::size_t>(t1)] +
                         values[static_cast<std::size_t>(t2 + 1)];
      if (lhs > rhs + 1e-9 * (1.0 + rhs)) {
        std::ostringstream os;
        os << "path budget '" << name << "': sub-additivity fails at T1=" << t1
           << ", T2=" << t2;
        throw std::invalid_argument(os.str());
      }
    }
  }
}

}  // namespace

PathBudgetFunction PathBudgetFunction::constant(double p, double diameter) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("path budget: constant must be >= 0");
  }
  auto fn = [p, diameter](std::int64_t t) {
    return std::min(p, diameter * static_cast<double>(t - 1));
  };
  return custom("constant", fn, diameter);
}

PathBudgetFunction PathBudgetFunction::sqrt_growth(double c, double diameter) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("path budget: sqrt coefficient must be >= 0");
  }
  auto fn = [c, diameter](std::int64_t t) {
    return std::min(c * std::sqrt(static_cast<double>(t)),
                    diameter * static_cast<double>(t - 1));
  };
  return custom("sqrt", fn, diameter);
}

PathBudgetFunction PathBudgetFunction::linear_growth(double c, double diameter) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("path budget: linear coefficient must be >= 0");
  }
  auto fn = [c, diameter](std::int64_t t) {
    return std::min(c * static_cast<double>(t),
                    diameter * static_cast<double>(t - 1));
  };
  return custom("linear", fn, diameter);
}

PathBudgetFunction PathBudgetFunction::custom(
    std::string name, std::function<double(std::int64_t)> fn, double diameter) {
  validate_budget_function(name, fn, diameter);
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->fn = std::move(fn);
  impl->diameter = diameter;
  return PathBudgetFunction(std::move(impl));
}

double PathBudgetFunction::operator()(std::int64_t horizon) const {
  if (horizon < 1) {
    throw std::invalid_argument("path budget: horizon must be >= 1");
  }
  return impl_->fn(horizon);
}

double PathBudgetFunction::diameter() const { return impl_->diameter; }

const std::string& PathBudgetFunction::name() const { return impl_->name; }

DoublingSegment doubling_segment(std::int64_t round) {
  if (round < 1) throw std::invalid_argument("doubling_segment: round must be >= 1");
  const int k = std::bit_width(static_cast<std::uint64_t>(round));
  DoublingSegment seg;
  seg.index = k;
  seg.start = std::int64_t{1} << (k - 1);
  seg.next_start = std::int64_t{1} << k;
  return seg;
}

double doubling_segment_budget(const PathBudgetFunction& budget,
                               int segment_index) {
  if (segment_index < 1 || segment_index > 62) {
    throw std::invalid_argument("doubling_segment_budget: bad segment index");
  }
  return budget((std::int64_t{1} << segment_index) - 1);
}

}  // namespace pogd
