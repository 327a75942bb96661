#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pogd/geometry.hpp"
#include "pogd/rng.hpp"

namespace pogd {

// Source of per-round losses and sub-gradients.
//
// Gradients follow the online protocol: one query per round, in round order,
// at the decision actually played (a second query for the same round
// throws). Loss values may be re-evaluated freely at arbitrary points, e.g.
// at comparator decisions for regret accounting.
class LossStream {
 public:
  virtual ~LossStream() = default;

  std::size_t dimension() const { return dim_; }
  std::int64_t horizon() const { return horizon_; }

  Vector gradient_at(std::int64_t round, const Vector& decision);

  virtual bool has_loss_values() const { return true; }
  virtual double loss(std::int64_t round, const Vector& point) const = 0;

  virtual void reset() { next_round_ = 1; }

 protected:
  LossStream(std::size_t dim, std::int64_t horizon);
  virtual Vector compute_gradient(std::int64_t round, const Vector& decision) = 0;

 private:
  std::size_t dim_;
  std::int64_t horizon_;
  std::int64_t next_round_ = 1;
};

/// Linear losses f_t(w) = g_t^T w with a fixed gradient sequence.
class LinearFixedStream final : public LossStream {
 public:
  explicit LinearFixedStream(std::vector<Vector> gradients);
  double loss(std::int64_t round, const Vector& point) const override;

 private:
  Vector compute_gradient(std::int64_t round, const Vector& decision) override;
  std::vector<Vector> gradients_;
};

// Linear losses with gradients sigma_t * scale * u for a fixed unit
// direction u and i.i.d. fair signs: sigma_t = sign(t - 1) of CounterRng(seed)
// per the rng.hpp discipline. Every gradient has norm exactly `scale`.
class RademacherStream final : public LossStream {
 public:
  RademacherStream(Vector direction, double scale, std::int64_t horizon,
                   std::uint64_t seed);
  double loss(std::int64_t round, const Vector& point) const override;

  double sign_at(std::int64_t round) const;
  std::vector<double> signs() const;
  const Vector& direction() const { return direction_; }
  double scale() const { return scale_; }

 private:
  Vector compute_gradient(std::int64_t round, const Vector& decision) override;
  Vector direction_;
  double scale_;
  CounterRng rng_;
};

// f_t(w) = |w^T x_t - d_t|. The sub-gradient is sign(w^T x_t - d_t) * x_t,
// and 0 at the kink (a valid sub-gradient that avoids gratuitous movement).
class AbsoluteRegressionStream final : public LossStream {
 public:
  AbsoluteRegressionStream(std::vector<Vector> features,
                           std::vector<double> targets);
  double loss(std::int64_t round, const Vector& point) const override;

  const std::vector<Vector>& features() const { return features_; }
  const std::vector<double>& targets() const { return targets_; }

 private:
  Vector compute_gradient(std::int64_t round, const Vector& decision) override;
  std::vector<Vector> features_;
  std::vector<double> targets_;
};

/// k rounds of the constant-zero loss, then the inner stream.
class ZeroPrefixStream final : public LossStream {
 public:
  ZeroPrefixStream(std::int64_t zeros, std::unique_ptr<LossStream> inner);
  double loss(std::int64_t round, const Vector& point) const override;
  void reset() override;

 private:
  Vector compute_gradient(std::int64_t round, const Vector& decision) override;
  std::int64_t zeros_;
  std::unique_ptr<LossStream> inner_;
};

/// Unit-norm direction; normalizes and rejects the zero vector.
RademacherStream gen_rademacher(Vector direction, double scale,
                                std::int64_t horizon, std::uint64_t seed);

// Sequential regression instance with a drifting ground truth.
//
// Counter layout (all substreams of CounterRng(seed)): substream 1 draws
// features x_t[i] = normal((t-1)*N + i); substream 2 draws noise
// eps_t = noise_scale * normal(t-1); substream 3 draws drift directions
// (pair (t-1)*N + i, normalized); substream 4 draws the start point.
// The ground truth walks w_{t+1} = project(w_t + drift_rate * zeta_t) and is
// returned as a comparator with its measured variation as budget.
struct RegressionInstance {
  AbsoluteRegressionStream stream;
  ComparatorPath ground_truth;
};

RegressionInstance gen_regression(const FeasibleSet& set, std::int64_t horizon,
                                  double drift_rate, double noise_scale,
                                  std::uint64_t seed);

// Piecewise-stationary comparator: boundaries 0 = t_0 < ... < t_M = T with a
// fixed point per segment.
struct SegmentedComparator {
  std::vector<std::int64_t> boundaries;
  std::vector<Vector> segment_points;

  ComparatorPath expand(const FeasibleSet& set, double budget) const;
};

// Best comparator among those stationary on the given segmentation: each
// segment takes argmin over the set of the summed gradients (closed form).
// M must be at most floor(P/D) + 1 so diameter-bounded hops respect P.
// Boundaries default to equal splits.
SegmentedComparator best_segmented_comparator(
    const std::vector<Vector>& gradients, const FeasibleSet& set, double path_budget,
    std::size_t segments,
    const std::optional<std::vector<std::int64_t>>& boundaries = std::nullopt);

// Exact optimum over grid-valued comparator paths (desk scale: N <= 2,
// T <= 8, at most 21 grid points per axis), minimizing sum_t g_t^T w_t*
// subject to the variation budget. The budget is enforced with at most one
// grid-cell diagonal of slack so boundary-feasible paths are not excluded;
// the returned path declares max(path_budget, measured variation).
ComparatorPath brute_force_comparator(const std::vector<Vector>& gradients,
                                      const FeasibleSet& set, double path_budget,
                                      std::size_t grid_resolution);

}  // namespace pogd
