#include "pogd/optimizer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pogd/errors.hpp"

namespace pogd {

namespace {

bool is_zero(const Vector& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

}  // namespace

Engine::Engine(FeasibleSet set, RatePolicy policy, Vector start)
    : set_(std::make_shared<FeasibleSet>(std::move(set))),
      policy_(std::move(policy)) {
  const auto* feasible = static_cast<const FeasibleSet*>(set_.get());
  if (feasible->is_box()) box_ = feasible;
  init(std::move(start));
}

Engine::Engine(std::shared_ptr<const ConvexSet> set, RatePolicy policy,
               Vector start)
    : set_(std::move(set)), policy_(std::move(policy)) {
  if (!set_) throw std::invalid_argument("engine: null set");
  if (const auto* feasible = dynamic_cast<const FeasibleSet*>(set_.get())) {
    if (feasible->is_box()) box_ = feasible;
  }
  init(std::move(start));
}

void Engine::init(Vector start) {
  require_dimension(start, set_->dimension(), "starting decision");
  require_finite(start, "starting decision");
  diameter_ = set_->diameter();

  Vector projected = set_->project(start);
  if (projected != start) start_was_projected_ = true;

  if (const auto* pc = std::get_if<PerCoordinatePolicy>(&policy_)) {
    if (box_ == nullptr) {
      throw UnsupportedSetError(
          "per-coordinate policy requires a box set (coordinate-wise "
          "projection must match Euclidean projection)");
    }
    if (pc->budget_hints.size() != set_->dimension()) {
      throw std::invalid_argument("per-coordinate policy: hint dimension mismatch");
    }
    for (double h : pc->budget_hints) {
      if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("per-coordinate policy: hints must be >= 0");
      }
    }
    state_.energy = GradientEnergy::with_coordinates(set_->dimension());
  } else {
    state_.energy = GradientEnergy::scalar();
  }

  if (const auto* co = std::get_if<ConstantOraclePolicy>(&policy_)) {
    if (!(co->final_energy > 0.0) || !std::isfinite(co->final_energy)) {
      throw OracleUndefinedError(
          "constant-oracle policy: final energy must be > 0");
    }
    if (!(co->path_budget >= 0.0) || !std::isfinite(co->path_budget)) {
      throw std::invalid_argument("constant-oracle policy: budget must be >= 0");
    }
  }
  if (const auto* ad = std::get_if<AdaptivePolicy>(&policy_)) {
    if (!(ad->budget_hint >= 0.0) || !std::isfinite(ad->budget_hint)) {
      throw std::invalid_argument("adaptive policy: budget hint must be >= 0");
    }
  }
  if (const auto* db = std::get_if<DoublingResetPolicy>(&policy_)) {
    segment_budget_ = doubling_segment_budget(db->budget, 1);
  }

  state_.decision = std::move(projected);
  initial_decision_ = state_.decision;
}

double Engine::current_rate() const {
  const double energy = state_.energy.total();
  if (const auto* co = std::get_if<ConstantOraclePolicy>(&policy_)) {
    return rate_constant_oracle(diameter_, co->path_budget, co->final_energy);
  }
  if (const auto* ad = std::get_if<AdaptivePolicy>(&policy_)) {
    return rate_adaptive(diameter_, ad->budget_hint, energy);
  }
  if (std::get_if<DoublingResetPolicy>(&policy_)) {
    return rate_adaptive(diameter_, segment_budget_, energy);
  }
  throw std::logic_error("current_rate: per-coordinate policy has no scalar rate");
}

StepRecord Engine::observe(const Vector& gradient) {
  require_dimension(gradient, set_->dimension(), "gradient");
  require_finite(gradient, "gradient");

  if (const auto* db = std::get_if<DoublingResetPolicy>(&policy_)) {
    const DoublingSegment seg = doubling_segment(state_.round);
    if (seg.index != state_.segment) {
      state_.segment = seg.index;
      state_.energy = GradientEnergy::scalar();
      segment_budget_ = doubling_segment_budget(db->budget, seg.index);
      if (db->reset_decision) state_.decision = initial_decision_;
    }
  }

  StepRecord rec;
  rec.round = state_.round;
  rec.decision = state_.decision;
  rec.gradient = gradient;
  rec.segment = state_.segment;

  state_.energy = update_energy(state_.energy, gradient);
  rec.energy_after = state_.energy.total();
  const bool gradient_zero = is_zero(gradient);

  if (std::get_if<PerCoordinatePolicy>(&policy_)) {
    const auto& hints = std::get<PerCoordinatePolicy>(policy_).budget_hints;
    const auto rates = rate_per_coordinate(
        box_->coordinate_diameters(), hints, state_.energy.coordinate_totals());
    bool any_active = false;
    for (const auto& r : rates) {
      if (r.has_value()) any_active = true;
    }
    if (!any_active) {
      rec.skipped = true;
      rec.next_decision = state_.decision;
    } else {
      rec.coordinate_eta = rates;
      Vector next = state_.decision;
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (!rates[i].has_value()) continue;  // dormant
        next[i] = clamp_coordinate(next[i] - *rates[i] * gradient[i],
                                   box_->lower()[i], box_->upper()[i]);
      }
      rec.next_decision = std::move(next);
    }
  } else if (state_.energy.total() == 0.0) {
    // Zero-gradient prefix (or a fresh doubling segment): no rate yet.
    rec.skipped = true;
    rec.next_decision = state_.decision;
  } else {
    const double eta = current_rate();
    rec.eta = eta;
    Vector moved = state_.decision;
    for (std::size_t i = 0; i < moved.size(); ++i) {
      moved[i] -= eta * gradient[i];
    }
    rec.next_decision = set_->project(moved);
  }

  state_.decision = rec.next_decision;
  state_.round += 1;
  if (!gradient_zero) state_.zero_prefix = false;
  return rec;
}

namespace {

std::vector<StepRecord> drive(LossStream& stream, Engine& engine,
                              std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("run: horizon must be >= 1");
  if (stream.dimension() != engine.set().dimension()) {
    throw std::invalid_argument("run: stream/set dimension mismatch");
  }
  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (t > stream.horizon()) {
      std::ostringstream os;
      os << "run: stream exhausted at round " << t << " of " << horizon;
      throw TruncatedRunError(os.str(), std::move(records));
    }
    const Vector g = stream.gradient_at(t, engine.state().decision);
    records.push_back(engine.observe(g));
  }
  return records;
}

}  // namespace

std::vector<StepRecord> run(LossStream& stream, const FeasibleSet& set,
                            const Vector& start, const RatePolicy& policy,
                            std::int64_t horizon) {
  Engine engine(set, policy, start);
  return drive(stream, engine, horizon);
}

std::vector<StepRecord> run(LossStream& stream,
                            std::shared_ptr<const ConvexSet> set,
                            const Vector& start, const RatePolicy& policy,
                            std::int64_t horizon) {
  Engine engine(std::move(set), policy, start);
  return drive(stream, engine, horizon);
}

}  // namespace pogd
