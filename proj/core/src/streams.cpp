#include "pogd/streams.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pogd/errors.hpp"

namespace pogd {

LossStream::LossStream(std::size_t dim, std::int64_t horizon)
    : dim_(dim), horizon_(horizon) {
  if (dim == 0) throw std::invalid_argument("stream: dimension must be >= 1");
  if (horizon < 1) throw std::invalid_argument("stream: horizon must be >= 1");
}

Vector LossStream::gradient_at(std::int64_t round, const Vector& decision) {
  if (round < 1 || round > horizon_) {
    throw std::out_of_range("stream: round outside horizon");
  }
  if (round != next_round_) {
    std::ostringstream os;
    os << "stream: gradients are revealed once per round in order; expected "
       << next_round_ << ", got " << round;
    throw std::logic_error(os.str());
  }
  require_dimension(decision, dim_, "stream decision");
  require_finite(decision, "stream decision");
  ++next_round_;
  return compute_gradient(round, decision);
}

LinearFixedStream::LinearFixedStream(std::vector<Vector> gradients)
    : LossStream(gradients.empty() ? 0 : gradients.front().size(),
                 static_cast<std::int64_t>(gradients.size())),
      gradients_(std::move(gradients)) {
  for (const Vector& g : gradients_) {
    require_dimension(g, dimension(), "fixed gradient");
    require_finite(g, "fixed gradient");
  }
}

double LinearFixedStream::loss(std::int64_t round, const Vector& point) const {
  return dot(gradients_.at(static_cast<std::size_t>(round - 1)), point);
}

Vector LinearFixedStream::compute_gradient(std::int64_t round, const Vector&) {
  return gradients_[static_cast<std::size_t>(round - 1)];
}

RademacherStream::RademacherStream(Vector direction, double scale,
                                   std::int64_t horizon, std::uint64_t seed)
    : LossStream(direction.size(), horizon),
      direction_(std::move(direction)),
      scale_(scale),
      rng_(seed) {
  require_finite(direction_, "rademacher direction");
  const double len = norm(direction_);
  if (len == 0.0) {
    throw std::invalid_argument("rademacher: direction must be nonzero");
  }
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw std::invalid_argument("rademacher: scale must be > 0");
  }
  for (double& x : direction_) x /= len;
}

double RademacherStream::sign_at(std::int64_t round) const {
  return rng_.sign(static_cast<std::uint64_t>(round - 1));
}

std::vector<double> RademacherStream::signs() const {
  std::vector<double> out(static_cast<std::size_t>(horizon()));
  for (std::int64_t t = 1; t <= horizon(); ++t) {
    out[static_cast<std::size_t>(t - 1)] = sign_at(t);
  }
  return out;
}

double RademacherStream::loss(std::int64_t round, const Vector& point) const {
  return sign_at(round) * scale_ * dot(direction_, point);
}

Vector RademacherStream::compute_gradient(std::int64_t round, const Vector&) {
  const double s = sign_at(round) * scale_;
  Vector g(direction_.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = s * direction_[i];
  return g;
}

AbsoluteRegressionStream::AbsoluteRegressionStream(std::vector<Vector> features,
                                                   std::vector<double> targets)
    : LossStream(features.empty() ? 0 : features.front().size(),
                 static_cast<std::int64_t>(features.size())),
      features_(std::move(features)),
      targets_(std::move(targets)) {
  if (features_.size() != targets_.size()) {
    throw std::invalid_argument("regression: features/targets length mismatch");
  }
  for (const Vector& x : features_) {
    require_dimension(x, dimension(), "regression feature");
    require_finite(x, "regression feature");
  }
  for (double d : targets_) {
    if (!std::isfinite(d)) {
      throw std::invalid_argument("regression: non-finite target");
    }
  }
}

double AbsoluteRegressionStream::loss(std::int64_t round,
                                      const Vector& point) const {
  const std::size_t t = static_cast<std::size_t>(round - 1);
  return std::abs(dot(features_.at(t), point) - targets_[t]);
}

Vector AbsoluteRegressionStream::compute_gradient(std::int64_t round,
                                                  const Vector& decision) {
  const std::size_t t = static_cast<std::size_t>(round - 1);
  const double margin = dot(features_[t], decision) - targets_[t];
  Vector g(dimension(), 0.0);
  if (margin == 0.0) return g;  // kink: zero sub-gradient
  const double s = margin > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = s * features_[t][i];
  return g;
}

ZeroPrefixStream::ZeroPrefixStream(std::int64_t zeros,
                                   std::unique_ptr<LossStream> inner)
    : LossStream(inner ? inner->dimension() : 0,
                 inner ? zeros + inner->horizon() : 0),
      zeros_(zeros),
      inner_(std::move(inner)) {
  if (zeros_ < 0) throw std::invalid_argument("zero prefix: negative length");
}

double ZeroPrefixStream::loss(std::int64_t round, const Vector& point) const {
  if (round <= zeros_) return 0.0;
  return inner_->loss(round - zeros_, point);
}

Vector ZeroPrefixStream::compute_gradient(std::int64_t round,
                                          const Vector& decision) {
  if (round <= zeros_) return Vector(dimension(), 0.0);
  return inner_->gradient_at(round - zeros_, decision);
}

void ZeroPrefixStream::reset() {
  LossStream::reset();
  inner_->reset();
}

RademacherStream gen_rademacher(Vector direction, double scale,
                                std::int64_t horizon, std::uint64_t seed) {
  return RademacherStream(std::move(direction), scale, horizon, seed);
}

namespace {

Vector unit_from_normals(const CounterRng& rng, std::uint64_t first_pair,
                         std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = rng.normal(first_pair + i);
  }
  const double len = norm(v);
  if (len == 0.0) {
    v.assign(n, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= len;
  return v;
}

Vector random_start_point(const FeasibleSet& set, const CounterRng& rng) {
  const std::size_t n = set.dimension();
  if (set.is_box()) {
    Vector p(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = set.lower()[i] + rng.uniform(i) * (set.upper()[i] - set.lower()[i]);
    }
    return p;
  }
  const Vector dir = unit_from_normals(rng, 1, n);
  const double s = rng.uniform(0) * set.radius();
  Vector p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = set.center()[i] + s * dir[i];
  return p;
}

}  // namespace

RegressionInstance gen_regression(const FeasibleSet& set, std::int64_t horizon,
                                  double drift_rate, double noise_scale,
                                  std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("gen_regression: horizon >= 1");
  if (!(drift_rate >= 0.0) || !std::isfinite(drift_rate)) {
    throw std::invalid_argument("gen_regression: drift_rate must be >= 0");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw std::invalid_argument("gen_regression: noise_scale must be >= 0");
  }
  const std::size_t n = set.dimension();
  const CounterRng root(seed);
  const CounterRng feat = root.substream(1);
  const CounterRng noise = root.substream(2);
  const CounterRng drift = root.substream(3);
  const CounterRng start = root.substream(4);

  std::vector<Vector> truth;
  truth.reserve(static_cast<std::size_t>(horizon));
  truth.push_back(set.project(random_start_point(set, start)));
  for (std::int64_t t = 1; t < horizon; ++t) {
    if (drift_rate == 0.0) {
      truth.push_back(truth.back());
      continue;
    }
    const Vector zeta = unit_from_normals(
        drift, static_cast<std::uint64_t>((t - 1)) * n, n);
    Vector next = truth.back();
    for (std::size_t i = 0; i < n; ++i) next[i] += drift_rate * zeta[i];
    truth.push_back(set.project(next));
  }

  std::vector<Vector> features(static_cast<std::size_t>(horizon));
  std::vector<double> targets(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = feat.normal(static_cast<std::uint64_t>((t - 1)) * n + i);
    }
    const double eps =
        noise_scale == 0.0
            ? 0.0
            : noise_scale * noise.normal(static_cast<std::uint64_t>(t - 1));
    targets[static_cast<std::size_t>(t - 1)] =
        dot(truth[static_cast<std::size_t>(t - 1)], x) + eps;
    features[static_cast<std::size_t>(t - 1)] = std::move(x);
  }

  const double measured = path_variation(truth);
  return RegressionInstance{
      AbsoluteRegressionStream(std::move(features), std::move(targets)),
      make_comparator_path(set, std::move(truth), measured)};
}

ComparatorPath SegmentedComparator::expand(const FeasibleSet& set,
                                           double budget) const {
  if (boundaries.size() != segment_points.size() + 1 || segment_points.empty()) {
    throw std::invalid_argument("segmented comparator: malformed");
  }
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(boundaries.back()));
  for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
    for (std::int64_t t = boundaries[k]; t < boundaries[k + 1]; ++t) {
      points.push_back(segment_points[k]);
    }
  }
  return make_comparator_path(set, std::move(points), budget);
}

SegmentedComparator best_segmented_comparator(
    const std::vector<Vector>& gradients, const FeasibleSet& set,
    double path_budget, std::size_t segments,
    const std::optional<std::vector<std::int64_t>>& boundaries) {
  const std::int64_t horizon = static_cast<std::int64_t>(gradients.size());
  if (horizon < 1) {
    throw std::invalid_argument("best_segmented_comparator: empty gradients");
  }
  if (!(path_budget >= 0.0) || !std::isfinite(path_budget)) {
    throw std::invalid_argument("best_segmented_comparator: budget must be >= 0");
  }
  for (const Vector& g : gradients) {
    require_dimension(g, set.dimension(), "best_segmented_comparator gradient");
  }
  const double d = set.diameter();
  const std::size_t max_segments =
      static_cast<std::size_t>(std::floor(path_budget / d)) + 1;
  if (segments < 1 || segments > max_segments) {
    std::ostringstream os;
    os << "best_segmented_comparator: " << segments
       << " segments infeasible for budget " << path_budget << " (max "
       << max_segments << ")";
    throw InfeasibleError(os.str());
  }
  if (static_cast<std::int64_t>(segments) > horizon) {
    throw InfeasibleError("best_segmented_comparator: more segments than rounds");
  }

  std::vector<std::int64_t> bounds;
  if (boundaries.has_value()) {
    bounds = *boundaries;
    if (bounds.size() != segments + 1 || bounds.front() != 0 ||
        bounds.back() != horizon) {
      throw std::invalid_argument(
          "best_segmented_comparator: boundaries must run 0..T");
    }
    for (std::size_t k = 1; k < bounds.size(); ++k) {
      if (bounds[k] <= bounds[k - 1]) {
        throw std::invalid_argument(
            "best_segmented_comparator: boundaries must increase");
      }
    }
  } else {
    bounds.resize(segments + 1);
    for (std::size_t k = 0; k <= segments; ++k) {
      bounds[k] = static_cast<std::int64_t>(
          (static_cast<std::size_t>(horizon) * k) / segments);
    }
  }

  SegmentedComparator out;
  out.boundaries = bounds;
  out.segment_points.reserve(segments);
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Vector sum(set.dimension(), 0.0);
    for (std::int64_t t = bounds[k]; t < bounds[k + 1]; ++t) {
      const Vector& g = gradients[static_cast<std::size_t>(t)];
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g[i];
    }
    out.segment_points.push_back(set.linear_minimizer(sum));
  }
  return out;
}

namespace {

struct FrontierEntry {
  std::int64_t used = 0;  // quantized budget units
  double cost = 0.0;      // sum of g_t^T p_t so far (minimized)
  std::int32_t parent_point = -1;
  std::int32_t parent_entry = -1;
};

// Insert while keeping entries sorted by `used` with strictly decreasing
// cost (a Pareto frontier).
void frontier_insert(std::vector<FrontierEntry>& frontier, FrontierEntry e) {
  auto it = std::lower_bound(
      frontier.begin(), frontier.end(), e.used,
      [](const FrontierEntry& a, std::int64_t u) { return a.used < u; });
  if (it != frontier.begin() && std::prev(it)->cost <= e.cost) return;
  if (it != frontier.end() && it->used == e.used) {
    if (it->cost <= e.cost) return;
    *it = e;
    ++it;
  } else {
    it = frontier.insert(it, e);
    ++it;
  }
  auto tail = it;
  while (tail != frontier.end() && tail->cost >= e.cost) ++tail;
  frontier.erase(it, tail);
}

}  // namespace

ComparatorPath brute_force_comparator(const std::vector<Vector>& gradients,
                                      const FeasibleSet& set, double path_budget,
                                      std::size_t grid_resolution) {
  const std::size_t n = set.dimension();
  const std::int64_t horizon = static_cast<std::int64_t>(gradients.size());
  if (n > 2) throw SizeLimitError("brute_force_comparator: N must be <= 2");
  if (horizon < 1 || horizon > 8) {
    throw SizeLimitError("brute_force_comparator: T must be in 1..8");
  }
  if (grid_resolution < 2 || grid_resolution > 21) {
    throw SizeLimitError("brute_force_comparator: grid resolution in 2..21");
  }
  if (!(path_budget >= 0.0) || !std::isfinite(path_budget)) {
    throw std::invalid_argument("brute_force_comparator: budget must be >= 0");
  }
  for (const Vector& g : gradients) {
    require_dimension(g, n, "brute_force_comparator gradient");
    require_finite(g, "brute_force_comparator gradient");
  }

  // Axis-aligned bounding grid, filtered to the set for balls.
  Vector lo(n), hi(n);
  if (set.is_box()) {
    lo = set.lower();
    hi = set.upper();
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = set.center()[i] - set.radius();
      hi[i] = set.center()[i] + set.radius();
    }
  }
  double cell_diag_sq = 0.0;
  Vector spacing(n);
  for (std::size_t i = 0; i < n; ++i) {
    spacing[i] = (hi[i] - lo[i]) / static_cast<double>(grid_resolution - 1);
    cell_diag_sq += spacing[i] * spacing[i];
  }
  const double cell_diag = std::sqrt(cell_diag_sq);

  std::vector<Vector> grid;
  const std::size_t axis_count = grid_resolution;
  if (n == 1) {
    for (std::size_t a = 0; a < axis_count; ++a) {
      Vector p{lo[0] + static_cast<double>(a) * spacing[0]};
      if (set.contains(p, 1e-12)) grid.push_back(std::move(p));
    }
  } else {
    for (std::size_t a = 0; a < axis_count; ++a) {
      for (std::size_t b = 0; b < axis_count; ++b) {
        Vector p{lo[0] + static_cast<double>(a) * spacing[0],
                 lo[1] + static_cast<double>(b) * spacing[1]};
        if (set.contains(p, 1e-12)) grid.push_back(std::move(p));
      }
    }
  }
  if (grid.empty()) {
    throw InfeasibleError("brute_force_comparator: grid too coarse for the set");
  }
  const std::size_t m = grid.size();

  // Budget is quantized downward in units small enough that the accumulated
  // rounding stays under half a cell diagonal; together with the half-cell
  // allowance below, admitted paths exceed the budget by at most one cell
  // diagonal, and no truly feasible grid path is excluded.
  const double unit =
      cell_diag / (2.0 * static_cast<double>(std::max<std::int64_t>(horizon - 1, 1)));
  const double allowance = path_budget + 0.5 * cell_diag;
  const std::int64_t max_units =
      static_cast<std::int64_t>(std::floor(allowance / unit + 1e-9));

  std::vector<std::vector<std::int64_t>> step_units(m,
                                                    std::vector<std::int64_t>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      step_units[a][b] = static_cast<std::int64_t>(
          std::floor(distance(grid[a], grid[b]) / unit + 1e-9));
    }
  }

  using Frontier = std::vector<FrontierEntry>;
  std::vector<std::vector<Frontier>> stages(
      static_cast<std::size_t>(horizon), std::vector<Frontier>(m));

  for (std::size_t p = 0; p < m; ++p) {
    stages[0][p].push_back(FrontierEntry{0, dot(gradients[0], grid[p]), -1, -1});
  }

  std::size_t operations = 0;
  for (std::int64_t t = 1; t < horizon; ++t) {
    const auto& prev = stages[static_cast<std::size_t>(t - 1)];
    auto& next = stages[static_cast<std::size_t>(t)];
    for (std::size_t src = 0; src < m; ++src) {
      const Frontier& entries = prev[src];
      for (std::size_t e = 0; e < entries.size(); ++e) {
        for (std::size_t dst = 0; dst < m; ++dst) {
          const std::int64_t used = entries[e].used + step_units[src][dst];
          if (used > max_units) continue;
          frontier_insert(
              next[dst],
              FrontierEntry{used,
                            entries[e].cost + dot(gradients[static_cast<std::size_t>(t)],
                                                  grid[dst]),
                            static_cast<std::int32_t>(src),
                            static_cast<std::int32_t>(e)});
          if (++operations > 200'000'000) {
            throw SizeLimitError("brute_force_comparator: search-space overflow");
          }
        }
      }
    }
  }

  double best_cost = std::numeric_limits<double>::infinity();
  std::int32_t best_point = -1, best_entry = -1;
  const auto& last = stages[static_cast<std::size_t>(horizon - 1)];
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t e = 0; e < last[p].size(); ++e) {
      if (last[p][e].cost < best_cost) {
        best_cost = last[p][e].cost;
        best_point = static_cast<std::int32_t>(p);
        best_entry = static_cast<std::int32_t>(e);
      }
    }
  }

  std::vector<Vector> path(static_cast<std::size_t>(horizon));
  for (std::int64_t t = horizon - 1; t >= 0; --t) {
    path[static_cast<std::size_t>(t)] = grid[static_cast<std::size_t>(best_point)];
    const FrontierEntry& e =
        stages[static_cast<std::size_t>(t)][static_cast<std::size_t>(best_point)]
              [static_cast<std::size_t>(best_entry)];
    best_point = e.parent_point;
    best_entry = e.parent_entry;
  }

  const double measured = path_variation(path);
  return make_comparator_path(set, std::move(path),
                              std::max(path_budget, measured));
}

}  // namespace pogd
