#include "pogd/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "pogd/errors.hpp"
#include "pogd/rng.hpp"

namespace pogd {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// --- config parsing -------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

class KeyValueMap {
 public:
  explicit KeyValueMap(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        std::ostringstream os;
        os << "config line " << line_no << ": expected key = value";
        throw ConfigError(os.str());
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        std::ostringstream os;
        os << "config line " << line_no << ": empty key";
        throw ConfigError(os.str());
      }
      values_[key] = value;
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  double take_double(const std::string& key, double fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    return parse_double(key, *raw);
  }

  std::int64_t take_int(const std::string& key, std::int64_t fallback) {
    auto raw = take(key);
    if (!raw) return fallback;
    try {
      std::size_t pos = 0;
      const std::int64_t v = std::stoll(*raw, &pos);
      if (pos != raw->size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config field '" + key + "': expected integer, got '" +
                        *raw + "'");
    }
  }

  std::string take_string(const std::string& key, std::string fallback) {
    auto raw = take(key);
    return raw ? *raw : fallback;
  }

  std::optional<Vector> take_vector(const std::string& key) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    Vector out;
    std::istringstream is(*raw);
    std::string part;
    while (std::getline(is, part, ';')) {
      out.push_back(parse_double(key, trim(part)));
    }
    if (out.empty()) {
      throw ConfigError("config field '" + key + "': empty vector");
    }
    return out;
  }

  void reject_leftovers() const {
    if (values_.empty()) return;
    std::ostringstream os;
    os << "unknown config key '" << values_.begin()->first << "'";
    throw ConfigError(os.str());
  }

 private:
  double parse_double(const std::string& key, const std::string& raw) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument("trailing junk");
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config field '" + key + "': expected finite number, got '" +
                        raw + "'");
    }
  }

  std::map<std::string, std::string> values_;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  KeyValueMap kv(text);
  ExperimentConfig cfg;

  cfg.set.kind = kv.take_string("set.kind", cfg.set.kind);
  cfg.set.dim = static_cast<std::size_t>(kv.take_int("set.dim", 1));
  cfg.set.radius = kv.take_double("set.radius", cfg.set.radius);
  if (auto v = kv.take_vector("set.center")) cfg.set.center = *v;
  if (auto v = kv.take_vector("set.lower")) cfg.set.lower = *v;
  if (auto v = kv.take_vector("set.upper")) cfg.set.upper = *v;

  cfg.policy.kind = kv.take_string("policy.kind", cfg.policy.kind);
  cfg.policy.p_hat = kv.take_double("policy.p_hat", cfg.policy.p_hat);
  if (auto v = kv.take_vector("policy.p_hat_i")) cfg.policy.p_hat_i = *v;
  if (auto raw = kv.take("policy.g_final")) {
    KeyValueMap one("x = " + *raw);
    cfg.policy.g_final = one.take_double("x", 0.0);
  }
  cfg.policy.budget_kind = kv.take_string("policy.budget.kind", cfg.policy.budget_kind);
  cfg.policy.budget_c = kv.take_double("policy.budget.c", cfg.policy.budget_c);
  cfg.policy.reset_decision = kv.take_int("policy.reset_decision", 0) != 0;

  cfg.stream.kind = kv.take_string("stream.kind", cfg.stream.kind);
  cfg.stream.scale = kv.take_double("stream.scale", cfg.stream.scale);
  if (auto v = kv.take_vector("stream.direction")) cfg.stream.direction = *v;
  cfg.stream.drift = kv.take_double("stream.drift", cfg.stream.drift);
  cfg.stream.noise = kv.take_double("stream.noise", cfg.stream.noise);
  cfg.stream.zero_prefix = kv.take_int("stream.zero_prefix", 0);

  cfg.comparator.kind = kv.take_string("comparator.kind", cfg.comparator.kind);
  cfg.comparator.p = kv.take_double("comparator.p", cfg.comparator.p);
  if (auto raw = kv.take("comparator.segments")) {
    KeyValueMap one("x = " + *raw);
    cfg.comparator.segments =
        static_cast<std::size_t>(one.take_int("x", 1));
  }
  cfg.comparator.grid = static_cast<std::size_t>(kv.take_int("comparator.grid", 21));

  cfg.horizon = kv.take_int("run.horizon", cfg.horizon);
  cfg.reps = kv.take_int("run.reps", cfg.reps);
  cfg.seed = static_cast<std::uint64_t>(kv.take_int("run.seed", 1));
  cfg.out_dir = kv.take_string("run.out", cfg.out_dir);

  kv.reject_leftovers();

  if (cfg.horizon < 1) throw ConfigError("config field 'run.horizon': must be >= 1");
  if (cfg.reps < 1) throw ConfigError("config field 'run.reps': must be >= 1");
  if (cfg.set.dim < 1) throw ConfigError("config field 'set.dim': must be >= 1");
  if (cfg.stream.zero_prefix < 0) {
    throw ConfigError("config field 'stream.zero_prefix': must be >= 0");
  }
  if (cfg.stream.zero_prefix >= cfg.horizon) {
    throw ConfigError("config field 'stream.zero_prefix': must leave rounds for the stream");
  }
  if (cfg.comparator.p < 0.0) {
    throw ConfigError("config field 'comparator.p': must be >= 0");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

FeasibleSet make_set(const SetSpec& spec) {
  if (spec.kind == "ball") {
    Vector center = spec.center.empty() ? Vector(spec.dim, 0.0) : spec.center;
    if (center.size() != spec.dim) {
      throw ConfigError("config field 'set.center': dimension mismatch");
    }
    return FeasibleSet::ball(std::move(center), spec.radius);
  }
  if (spec.kind == "box") {
    Vector lower = spec.lower.empty() ? Vector(spec.dim, -1.0) : spec.lower;
    Vector upper = spec.upper.empty() ? Vector(spec.dim, 1.0) : spec.upper;
    if (lower.size() != spec.dim || upper.size() != spec.dim) {
      throw ConfigError("config field 'set.lower/set.upper': dimension mismatch");
    }
    return FeasibleSet::box(std::move(lower), std::move(upper));
  }
  throw ConfigError("config field 'set.kind': expected ball or box, got '" +
                    spec.kind + "'");
}

// --- per-repetition execution --------------------------------------------

namespace {

struct RepArtifacts {
  std::vector<StepRecord> records;
  RegretReport report;
};

struct BuiltStream {
  std::unique_ptr<LossStream> stream;
  std::optional<ComparatorPath> ground_truth;
};

Vector seeded_unit_direction(const CounterRng& rng, std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal(i);
  const double len = norm(v);
  if (len == 0.0) {
    v.assign(n, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= len;
  return v;
}

BuiltStream build_stream(const ExperimentConfig& cfg, const FeasibleSet& set,
                         std::uint64_t rep_seed) {
  const CounterRng rng(rep_seed);
  const std::int64_t inner_horizon = cfg.horizon - cfg.stream.zero_prefix;
  BuiltStream out;
  std::unique_ptr<LossStream> inner;

  if (cfg.stream.kind == "rademacher") {
    Vector direction = cfg.stream.direction.empty()
                           ? seeded_unit_direction(rng.substream(5), set.dimension())
                           : cfg.stream.direction;
    inner = std::make_unique<RademacherStream>(std::move(direction),
                                               cfg.stream.scale, inner_horizon,
                                               rng.substream(6).seed());
  } else if (cfg.stream.kind == "regression") {
    RegressionInstance instance =
        gen_regression(set, inner_horizon, cfg.stream.drift, cfg.stream.noise,
                       rng.substream(7).seed());
    out.ground_truth = std::move(instance.ground_truth);
    inner = std::make_unique<AbsoluteRegressionStream>(std::move(instance.stream));
  } else {
    throw ConfigError("config field 'stream.kind': expected rademacher or regression, got '" +
                      cfg.stream.kind + "'");
  }

  if (cfg.stream.zero_prefix > 0) {
    if (out.ground_truth.has_value()) {
      // Hold the first ground-truth point through the prefix.
      std::vector<Vector> points;
      points.reserve(static_cast<std::size_t>(cfg.horizon));
      for (std::int64_t t = 0; t < cfg.stream.zero_prefix; ++t) {
        points.push_back(out.ground_truth->points.front());
      }
      for (Vector& p : out.ground_truth->points) points.push_back(std::move(p));
      out.ground_truth =
          make_comparator_path(set, std::move(points), out.ground_truth->budget);
    }
    inner = std::make_unique<ZeroPrefixStream>(cfg.stream.zero_prefix,
                                               std::move(inner));
  }
  out.stream = std::move(inner);
  return out;
}

std::vector<Vector> recorded_gradients(const std::vector<StepRecord>& records) {
  std::vector<Vector> out;
  out.reserve(records.size());
  for (const StepRecord& rec : records) out.push_back(rec.gradient);
  return out;
}

std::vector<double> recorded_norms(const std::vector<StepRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const StepRecord& rec : records) out.push_back(norm(rec.gradient));
  return out;
}

std::vector<std::optional<double>> recorded_rates(
    const std::vector<StepRecord>& records) {
  std::vector<std::optional<double>> out;
  out.reserve(records.size());
  for (const StepRecord& rec : records) out.push_back(rec.eta);
  return out;
}

std::vector<double> coordinate_energies(const std::vector<StepRecord>& records,
                                        std::size_t dim) {
  std::vector<double> sum_sq(dim, 0.0);
  for (const StepRecord& rec : records) {
    for (std::size_t i = 0; i < dim; ++i) {
      sum_sq[i] += rec.gradient[i] * rec.gradient[i];
    }
  }
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = std::sqrt(sum_sq[i]);
  return out;
}

ComparatorPath resolve_comparator(const ExperimentConfig& cfg,
                                  const FeasibleSet& set,
                                  const std::vector<StepRecord>& records,
                                  const std::optional<ComparatorPath>& ground_truth) {
  if (cfg.comparator.kind == "ground_truth") {
    if (!ground_truth.has_value()) {
      throw ConfigError(
          "config field 'comparator.kind': ground_truth requires a regression stream");
    }
    return *ground_truth;
  }
  const std::vector<Vector> gradients = recorded_gradients(records);
  if (cfg.comparator.kind == "segmented") {
    const double d = set.diameter();
    const std::size_t segments = cfg.comparator.segments.value_or(
        static_cast<std::size_t>(std::floor(cfg.comparator.p / d)) + 1);
    return best_segmented_comparator(gradients, set, cfg.comparator.p, segments)
        .expand(set, cfg.comparator.p);
  }
  if (cfg.comparator.kind == "brute_force") {
    return brute_force_comparator(gradients, set, cfg.comparator.p,
                                  cfg.comparator.grid);
  }
  throw ConfigError("config field 'comparator.kind': expected segmented, ground_truth or brute_force, got '" +
                    cfg.comparator.kind + "'");
}

PathBudgetFunction make_budget_function(const PolicySpec& policy, double diameter) {
  if (policy.budget_kind == "constant") {
    return PathBudgetFunction::constant(policy.budget_c, diameter);
  }
  if (policy.budget_kind == "sqrt") {
    return PathBudgetFunction::sqrt_growth(policy.budget_c, diameter);
  }
  if (policy.budget_kind == "linear") {
    return PathBudgetFunction::linear_growth(policy.budget_c, diameter);
  }
  throw ConfigError("config field 'policy.budget.kind': expected constant, sqrt or linear, got '" +
                    policy.budget_kind + "'");
}

void attach_bounds(RegretReport& report, const ExperimentConfig& cfg,
                   const FeasibleSet& set, const ComparatorPath& comparator,
                   const std::vector<StepRecord>& records) {
  const double d = set.diameter();
  const double p = comparator.budget;
  const double regret = report.linearized_regret;
  const std::int64_t horizon = static_cast<std::int64_t>(records.size());

  report.bounds["lower_sum"] = lower_bound_sum(d, p, report.final_energy);
  report.bounds["lower_max"] =
      lower_bound_max(d, p, report.max_grad_norm, horizon);

  const bool monotone = rates_nonincreasing_within_segments(records);
  report.violations["rate_monotonicity"] = !monotone;

  if (cfg.policy.kind == "adaptive") {
    const double b = bound_adaptive(d, p, cfg.policy.p_hat, report.final_energy);
    report.bounds["adaptive"] = b;
    report.violations["adaptive"] = violates_bound(regret, b);
    if (monotone) {
      const double b1 = bound_rate_sequence(d, p, recorded_rates(records),
                                       recorded_norms(records));
      report.bounds["rate_sequence"] = b1;
      report.violations["rate_sequence"] = violates_bound(regret, b1);
    }
  } else if (cfg.policy.kind == "constant_oracle") {
    const double b = bound_constant(d, p, report.final_energy);
    report.bounds["constant"] = b;
    // The oracle guarantee presumes the rate was tuned for this run's G_T.
    const double tuned = cfg.policy.g_final.value_or(report.final_energy);
    const bool consistent =
        std::abs(tuned - report.final_energy) <= 1e-9 * (1.0 + tuned);
    report.violations["constant"] = consistent && violates_bound(regret, b);
    if (monotone) {
      const double b1 = bound_rate_sequence(d, p, recorded_rates(records),
                                       recorded_norms(records));
      report.bounds["rate_sequence"] = b1;
      report.violations["rate_sequence"] = violates_bound(regret, b1);
    }
  } else if (cfg.policy.kind == "per_coordinate") {
    const std::vector<double> widths = set.coordinate_diameters();
    const std::vector<double> variation =
        coordinate_path_variations(comparator.points);
    const std::vector<double> energies =
        coordinate_energies(records, set.dimension());
    std::vector<double> hints = cfg.policy.p_hat_i;
    if (hints.empty()) hints.assign(set.dimension(), 0.0);
    double b = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      if (widths[i] == 0.0) continue;
      b += bound_adaptive(widths[i], variation[i], hints[i], energies[i]);
    }
    report.bounds["per_coordinate"] = b;
    report.violations["per_coordinate"] = violates_bound(regret, b);
  } else if (cfg.policy.kind == "doubling") {
    const PathBudgetFunction budget = make_budget_function(cfg.policy, d);
    const DoublingBounds b =
        bounds_doubling(d, budget, horizon, recorded_norms(records));
    report.bounds["doubling_sum"] = b.sum_form;
    report.bounds["doubling_max"] = b.max_form;
    report.violations["doubling_sum"] = violates_bound(regret, b.sum_form);
    report.violations["doubling_max"] = violates_bound(regret, b.max_form);
  }
}

RatePolicy make_policy(const ExperimentConfig& cfg, const FeasibleSet& set,
                       double comparator_budget, std::optional<double> g_final) {
  if (cfg.policy.kind == "adaptive") {
    return AdaptivePolicy{cfg.policy.p_hat};
  }
  if (cfg.policy.kind == "constant_oracle") {
    return ConstantOraclePolicy{comparator_budget, g_final.value_or(0.0)};
  }
  if (cfg.policy.kind == "per_coordinate") {
    std::vector<double> hints = cfg.policy.p_hat_i;
    if (hints.empty()) hints.assign(set.dimension(), 0.0);
    return PerCoordinatePolicy{std::move(hints)};
  }
  if (cfg.policy.kind == "doubling") {
    return DoublingResetPolicy{make_budget_function(cfg.policy, set.diameter()),
                               cfg.policy.reset_decision};
  }
  throw ConfigError("config field 'policy.kind': expected adaptive, constant_oracle, per_coordinate or doubling, got '" +
                    cfg.policy.kind + "'");
}

RepArtifacts run_one_rep(const ExperimentConfig& cfg, const FeasibleSet& set,
                         std::int64_t rep) {
  const std::uint64_t rep_seed =
      CounterRng(cfg.seed).word(static_cast<std::uint64_t>(rep));
  BuiltStream built = build_stream(cfg, set, rep_seed);
  const Vector start = set.midpoint();

  std::optional<double> g_final = cfg.policy.g_final;
  const double known_budget = cfg.comparator.kind == "ground_truth" && built.ground_truth
                                  ? built.ground_truth->budget
                                  : cfg.comparator.p;
  if (cfg.policy.kind == "constant_oracle" && !g_final.has_value()) {
    // Tuning pass: realize G_T with the adaptive policy, then rerun.
    std::vector<StepRecord> pre =
        run(*built.stream, set, start, AdaptivePolicy{known_budget}, cfg.horizon);
    double sum_sq = 0.0;
    for (const StepRecord& rec : pre) {
      const double g = norm(rec.gradient);
      sum_sq += g * g;
    }
    g_final = std::sqrt(sum_sq);
    built.stream->reset();
  }

  const RatePolicy policy = make_policy(cfg, set, known_budget, g_final);
  RepArtifacts out;
  out.records = run(*built.stream, set, start, policy, cfg.horizon);

  const ComparatorPath comparator =
      resolve_comparator(cfg, set, out.records, built.ground_truth);
  out.report = dynamic_regret(out.records, comparator, *built.stream);
  attach_bounds(out.report, cfg, set, comparator, out.records);
  return out;
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body) {
  const unsigned workers = std::min<std::int64_t>(
      std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string csv_eta_field(const StepRecord& rec) {
  if (rec.skipped) return "skipped";
  if (!rec.coordinate_eta.empty()) {
    std::string out;
    for (std::size_t i = 0; i < rec.coordinate_eta.size(); ++i) {
      if (i > 0) out += ';';
      out += rec.coordinate_eta[i].has_value()
                 ? format_g17(*rec.coordinate_eta[i])
                 : "dormant";
    }
    return out;
  }
  return rec.eta.has_value() ? format_g17(*rec.eta) : "skipped";
}

std::string csv_vector_field(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += format_g17(v[i]);
  }
  return out;
}

double bound_or_nan(const RegretReport& report, const char* name) {
  auto it = report.bounds.find(name);
  return it == report.bounds.end() ? std::nan("") : it->second;
}

}  // namespace

const char kTraceCsvHeader[] = "t,w,grad_norm,eta,G_t,segment_k";
const char kSummaryCsvHeader[] =
    "rep,realized_regret,linearized_regret,G_T,L,path_variation,"
    "bound_rate_sequence,bound_constant,bound_adaptive,bound_per_coordinate,"
    "bound_doubling_sum,bound_doubling_max,lower_bound_sum,lower_bound_max,"
    "violation";

void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << kTraceCsvHeader << '\n';
  for (const StepRecord& rec : records) {
    os << rec.round << ',' << csv_vector_field(rec.decision) << ','
       << format_g17(norm(rec.gradient)) << ',' << csv_eta_field(rec) << ','
       << format_g17(rec.energy_after) << ',' << rec.segment << '\n';
  }
}

void write_summary_row(std::ostream& os, std::int64_t rep,
                       const RegretReport& report) {
  os << rep << ','
     << format_g17(report.realized_dynamic_regret.value_or(std::nan(""))) << ','
     << format_g17(report.linearized_regret) << ','
     << format_g17(report.final_energy) << ','
     << format_g17(report.max_grad_norm) << ','
     << format_g17(report.path_variation) << ','
     << format_g17(bound_or_nan(report, "rate_sequence")) << ','
     << format_g17(bound_or_nan(report, "constant")) << ','
     << format_g17(bound_or_nan(report, "adaptive")) << ','
     << format_g17(bound_or_nan(report, "per_coordinate")) << ','
     << format_g17(bound_or_nan(report, "doubling_sum")) << ','
     << format_g17(bound_or_nan(report, "doubling_max")) << ','
     << format_g17(bound_or_nan(report, "lower_sum")) << ','
     << format_g17(bound_or_nan(report, "lower_max")) << ','
     << (report.any_violation() ? 1 : 0) << '\n';
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  const FeasibleSet set = make_set(cfg.set);
  if (cfg.policy.kind == "per_coordinate" && !set.is_box()) {
    throw ConfigError("config field 'policy.kind': per_coordinate requires set.kind = box");
  }

  std::vector<RepArtifacts> artifacts(static_cast<std::size_t>(cfg.reps));
  parallel_for(cfg.reps, [&](std::int64_t rep) {
    artifacts[static_cast<std::size_t>(rep)] = run_one_rep(cfg, set, rep);
    if (rep != 0) artifacts[static_cast<std::size_t>(rep)].records.clear();
  });

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " + cfg.out_dir);
  }

  ExperimentOutcome outcome;
  outcome.trace_path = (fs::path(cfg.out_dir) / "trace.csv").string();
  outcome.summary_path = (fs::path(cfg.out_dir) / "summary.csv").string();

  {
    std::ofstream trace(outcome.trace_path, std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write " + outcome.trace_path);
    write_trace_csv(trace, artifacts.front().records);
  }
  {
    std::ofstream summary(outcome.summary_path, std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write " + outcome.summary_path);
    summary << kSummaryCsvHeader << '\n';
    for (std::int64_t rep = 0; rep < cfg.reps; ++rep) {
      write_summary_row(summary, rep,
                        artifacts[static_cast<std::size_t>(rep)].report);
    }
  }

  outcome.reports.reserve(artifacts.size());
  for (RepArtifacts& a : artifacts) {
    if (a.report.any_violation()) outcome.status = 1;
    outcome.reports.push_back(std::move(a.report));
  }
  return outcome;
}

// --- studies ---------------------------------------------------------------

LowerBoundStudyResult lower_bound_study(const LowerBoundStudyConfig& cfg) {
  if (cfg.reps < 1 || cfg.horizon < 1) {
    throw std::invalid_argument("lower_bound_study: reps and horizon must be >= 1");
  }
  const FeasibleSet set =
      FeasibleSet::ball(Vector(cfg.dim, 0.0), cfg.radius);
  const double diameter = set.diameter();

  LowerBoundStudyResult result;
  result.regrets.assign(static_cast<std::size_t>(cfg.reps), 0.0);
  const CounterRng root(cfg.seed);

  parallel_for(cfg.reps, [&](std::int64_t rep) {
    const std::uint64_t rep_seed = root.word(static_cast<std::uint64_t>(rep));
    const CounterRng rng(rep_seed);
    RademacherStream stream(seeded_unit_direction(rng.substream(5), cfg.dim),
                            cfg.scale, cfg.horizon, rng.substream(6).seed());
    std::vector<StepRecord> records =
        run(stream, set, set.midpoint(), AdaptivePolicy{0.0}, cfg.horizon);
    const ComparatorPath best_fixed =
        best_segmented_comparator(recorded_gradients(records), set, 0.0, 1)
            .expand(set, 0.0);
    result.regrets[static_cast<std::size_t>(rep)] =
        linearized_regret(records, best_fixed);
    if (rep == 0) result.rep0_signs = stream.signs();
  });

  double sum = 0.0;
  for (double r : result.regrets) sum += r;
  result.mean_regret = sum / static_cast<double>(cfg.reps);
  result.final_energy =
      cfg.scale * std::sqrt(static_cast<double>(cfg.horizon));
  result.lower_sum = lower_bound_sum(diameter, 0.0, result.final_energy);
  result.lower_max = lower_bound_max(diameter, 0.0, cfg.scale, cfg.horizon);
  result.threshold = 0.5 * result.lower_sum;
  result.pass = result.mean_regret >= result.threshold;
  return result;
}

std::vector<TraceIneqSample> trace_inequality_study(
    const TraceIneqStudyConfig& cfg) {
  if (cfg.dims.empty() || cfg.samples < 1) {
    throw std::invalid_argument("trace_inequality_study: empty sweep");
  }
  std::vector<TraceIneqSample> out;
  out.reserve(static_cast<std::size_t>(cfg.samples));
  const CounterRng root(cfg.seed);
  for (std::int64_t s = 0; s < cfg.samples; ++s) {
    const CounterRng rng(root.word(static_cast<std::uint64_t>(s)));
    const std::size_t n = cfg.dims[static_cast<std::size_t>(s) % cfg.dims.size()];
    const char* family = s % 5 == 3 ? "rank1" : (s % 5 == 4 ? "isotropic" : "general");
    GramAccumulator gram(n);
    std::int64_t horizon;
    if (family == std::string("isotropic")) {
      // Cycle equally scaled basis vectors; the Gram matrix is a multiple
      // of the identity. Full cycles only, within the horizon sweep.
      const std::int64_t max_cycles = std::max<std::int64_t>(
          1, std::min<std::int64_t>(8, cfg.max_horizon /
                                           static_cast<std::int64_t>(n)));
      const std::int64_t cycles =
          1 + static_cast<std::int64_t>(rng.word(0) %
                                        static_cast<std::uint64_t>(max_cycles));
      horizon = cycles * static_cast<std::int64_t>(n);
      const double scale = 0.5 + rng.uniform(1);
      for (std::int64_t t = 0; t < horizon; ++t) {
        Vector g(n, 0.0);
        g[static_cast<std::size_t>(t) % n] = scale;
        gram.add(g);
      }
    } else if (family == std::string("rank1")) {
      horizon = 1 + static_cast<std::int64_t>(rng.word(0) % cfg.max_horizon);
      const Vector direction = seeded_unit_direction(rng.substream(2), n);
      for (std::int64_t t = 0; t < horizon; ++t) {
        const double c = 2.0 * rng.uniform(16 + static_cast<std::uint64_t>(t)) - 1.0;
        Vector g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = c * direction[i];
        gram.add(g);
      }
    } else {
      horizon = 1 + static_cast<std::int64_t>(rng.word(0) % cfg.max_horizon);
      const CounterRng draws = rng.substream(3);
      for (std::int64_t t = 0; t < horizon; ++t) {
        Vector g(n);
        for (std::size_t i = 0; i < n; ++i) {
          g[i] = draws.normal(static_cast<std::uint64_t>(t) * n + i);
        }
        gram.add(g);
      }
    }
    const TraceInequalityResult r = trace_inequality(gram);
    out.push_back(TraceIneqSample{n, horizon, family, r.lhs, r.rhs, r.ratio});
  }
  return out;
}

}  // namespace pogd
