#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pogd/analysis.hpp"
#include "pogd/geometry.hpp"
#include "pogd/optimizer.hpp"
#include "pogd/scheduler.hpp"
#include "pogd/streams.hpp"

namespace pogd {

/// 17 significant digits (printf %.17g); enough to round-trip any double.
std::string format_g17(double x);

// --- experiment configuration ------------------------------------------
//
// Flat key=value text with dotted namespaces; '#' starts a comment.
// Unknown keys are rejected with the offending name. Vector values join
// coordinates with ';' (e.g. set.lower = -1;-1).

struct SetSpec {
  std::string kind = "ball";  // ball | box
  std::size_t dim = 1;
  double radius = 1.0;
  Vector center;  // default: origin
  Vector lower;   // default: -1 each
  Vector upper;   // default: +1 each
};

struct PolicySpec {
  std::string kind = "adaptive";  // adaptive | constant_oracle | per_coordinate | doubling
  double p_hat = 0.0;
  std::vector<double> p_hat_i;        // per_coordinate; default zeros
  std::optional<double> g_final;      // constant_oracle; absent = two-pass auto
  std::string budget_kind = "sqrt";   // doubling: constant | sqrt | linear
  double budget_c = 1.0;
  bool reset_decision = false;
};

struct StreamSpec {
  std::string kind = "rademacher";  // rademacher | regression
  double scale = 1.0;
  Vector direction;  // rademacher; default: seeded random unit
  double drift = 0.0;
  double noise = 0.0;
  std::int64_t zero_prefix = 0;  // prepended zero-gradient rounds
};

struct ComparatorSpec {
  std::string kind = "segmented";  // segmented | ground_truth | brute_force
  double p = 0.0;
  std::optional<std::size_t> segments;  // default floor(P/D) + 1
  std::size_t grid = 21;                // brute_force resolution
};

struct ExperimentConfig {
  SetSpec set;
  PolicySpec policy;
  StreamSpec stream;
  ComparatorSpec comparator;
  std::int64_t horizon = 100;
  std::int64_t reps = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

FeasibleSet make_set(const SetSpec& spec);

// --- experiment runner ---------------------------------------------------

// Per-repetition summary CSV and a per-round trace CSV for repetition 0.
// Repetitions run concurrently; every output is a pure function of
// (config, seed), so reruns are byte-identical. Status is 0, or 1 when any
// upper bound was violated beyond tolerance.
struct ExperimentOutcome {
  int status = 0;
  std::vector<RegretReport> reports;
  std::string trace_path;
  std::string summary_path;
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

extern const char kTraceCsvHeader[];
extern const char kSummaryCsvHeader[];

void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& records);
void write_summary_row(std::ostream& os, std::int64_t rep,
                       const RegretReport& report);

// --- studies backing the CLI subcommands ---------------------------------

// Monte Carlo adversarial study: adaptive policy on Rademacher streams
// against the best fixed comparator. The pass threshold is half of the
// matching adversarial floor D G_T / (2 sqrt(2)); the half factor is a
// conservative calibration of the worst-case construction.
struct LowerBoundStudyConfig {
  std::size_t dim = 2;
  double radius = 1.0;  // ball at the origin, diameter 2r
  double scale = 1.0;
  std::int64_t horizon = 4096;
  std::int64_t reps = 2000;
  std::uint64_t seed = 1;
};

struct LowerBoundStudyResult {
  double mean_regret = 0.0;
  double final_energy = 0.0;  // L sqrt(T), identical across reps
  double threshold = 0.0;     // 0.5 * D G_T / (2 sqrt(2))
  double lower_sum = 0.0;
  double lower_max = 0.0;
  bool pass = false;
  std::vector<double> regrets;     // one per repetition
  std::vector<double> rep0_signs;  // sign sequence of repetition 0
};

LowerBoundStudyResult lower_bound_study(const LowerBoundStudyConfig& config);

// Random Gram accumulations for the energy-vs-trace comparison, mixing
// general, collinear (rank-1) and isotropic gradient sets.
struct TraceIneqStudyConfig {
  std::vector<std::size_t> dims = {2, 4, 8, 16};
  std::int64_t samples = 500;
  std::int64_t max_horizon = 100;
  std::uint64_t seed = 1;
};

struct TraceIneqSample {
  std::size_t dim = 0;
  std::int64_t horizon = 0;
  std::string family;  // general | rank1 | isotropic
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 1.0;
};

std::vector<TraceIneqSample> trace_inequality_study(
    const TraceIneqStudyConfig& config);

}  // namespace pogd
