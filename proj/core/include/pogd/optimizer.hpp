#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pogd/geometry.hpp"
#include "pogd/scheduler.hpp"
#include "pogd/streams.hpp"

namespace pogd {

struct OptimizerState {
  Vector decision;        // w_t, always inside the set
  GradientEnergy energy;  // segment-local under the doubling policy
  std::int64_t round = 1;
  bool zero_prefix = true;  // no nonzero gradient seen yet
  int segment = 1;
};

// One round of the projected descent recursion. `eta` is empty on rounds
// skipped inside a zero-gradient prefix (then next_decision == decision and
// the gradient is zero). Per-coordinate runs fill coordinate_eta instead,
// with nullopt marking dormant coordinates.
struct StepRecord {
  std::int64_t round = 1;
  Vector decision;
  Vector gradient;
  std::optional<double> eta;
  std::vector<std::optional<double>> coordinate_eta;
  Vector next_decision;
  double energy_after = 0.0;
  int segment = 1;
  bool skipped = false;
};

// Projected online sub-gradient descent. Observe a sub-gradient at the
// current decision, fold it into the energy accumulator, ask the rate policy
// for eta_t (the adaptive rate uses G_t including the current round), and
// take the projected step w_{t+1} = project(w_t - eta_t g_t).
//
// While the energy is zero the decision is left untouched and the round is
// recorded as skipped. Zero gradients after the first nonzero one instead
// take a regular zero step, with eta recorded. An engine instance is
// single-owner; run independent instances for concurrent experiments.
//
// Any ConvexSet works for the scalar policies; the per-coordinate policy
// needs the shipped box sets (coordinate-wise clamping must match Euclidean
// projection).
class Engine {
 public:
  Engine(FeasibleSet set, RatePolicy policy, Vector start);
  Engine(std::shared_ptr<const ConvexSet> set, RatePolicy policy, Vector start);

  StepRecord observe(const Vector& gradient);

  const OptimizerState& state() const { return state_; }
  const ConvexSet& set() const { return *set_; }
  const RatePolicy& policy() const { return policy_; }

  /// True when the starting decision was outside the set and got projected.
  bool start_was_projected() const { return start_was_projected_; }

 private:
  void init(Vector start);
  double current_rate() const;

  std::shared_ptr<const ConvexSet> set_;
  const FeasibleSet* box_ = nullptr;  // set when the set is a shipped box
  RatePolicy policy_;
  OptimizerState state_;
  Vector initial_decision_;
  double diameter_ = 0.0;
  double segment_budget_ = 0.0;  // doubling only
  bool start_was_projected_ = false;
};

/// Drives the engine over the stream for `horizon` rounds, querying each
/// gradient at the decision of that round. Throws TruncatedRunError carrying
/// the partial records when the stream is shorter than the horizon.
std::vector<StepRecord> run(LossStream& stream, const FeasibleSet& set,
                            const Vector& start, const RatePolicy& policy,
                            std::int64_t horizon);
std::vector<StepRecord> run(LossStream& stream,
                            std::shared_ptr<const ConvexSet> set,
                            const Vector& start, const RatePolicy& policy,
                            std::int64_t horizon);

class TruncatedRunError : public std::runtime_error {
 public:
  TruncatedRunError(std::string message, std::vector<StepRecord> partial)
      : std::runtime_error(std::move(message)), records(std::move(partial)) {}

  std::vector<StepRecord> records;
};

}  // namespace pogd
