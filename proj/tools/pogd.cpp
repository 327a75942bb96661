// Experiment runner for the pogd library: seeded runs with CSV traces,
// the verification suite, the adversarial lower-bound study, and the
// gradient-energy vs outer-product trace study.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "pogd/errors.hpp"
#include "pogd/experiment.hpp"
#include "pogd/verify.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<std::int64_t> reps) {
  pogd::ExperimentConfig cfg = pogd::parse_config_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed) cfg.seed = *seed;
  if (reps) cfg.reps = *reps;

  const pogd::ExperimentOutcome outcome = pogd::run_experiment(cfg);
  int violations = 0;
  for (const pogd::RegretReport& report : outcome.reports) {
    if (report.any_violation()) ++violations;
  }
  std::cout << "wrote " << outcome.trace_path << " and " << outcome.summary_path
            << "\n"
            << outcome.reports.size() << " repetitions, " << violations
            << " with bound violations\n";
  return outcome.status == 0 ? kExitOk : kExitViolation;
}

int cmd_verify(const std::string& scale, const std::string& out_dir) {
  const pogd::VerifyScale s =
      scale == "full" ? pogd::VerifyScale::kFull : pogd::VerifyScale::kSmall;
  const pogd::VerifyReport report = pogd::verify_suite(s, &std::cout);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out = open_output(fs::path(out_dir) / "verify.csv");
    out << "id,name,pass,detail\n";
    for (const pogd::CriterionResult& c : report.criteria) {
      std::string detail = c.detail;
      for (char& ch : detail) {
        if (ch == ',') ch = ';';
      }
      out << c.id << ',' << c.name << ',' << (c.pass ? 1 : 0) << ',' << detail
          << '\n';
    }
  }
  std::cout << (report.all_pass() ? "all criteria passed" : "CRITERIA FAILED")
            << '\n';
  return report.all_pass() ? kExitOk : kExitViolation;
}

int cmd_lower_bound(const pogd::LowerBoundStudyConfig& cfg,
                    const std::string& out_dir) {
  const pogd::LowerBoundStudyResult result = pogd::lower_bound_study(cfg);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    {
      std::ofstream out = open_output(fs::path(out_dir) / "lower_bound.csv");
      out << "rep,regret\n";
      for (std::size_t rep = 0; rep < result.regrets.size(); ++rep) {
        out << rep << ',' << pogd::format_g17(result.regrets[rep]) << '\n';
      }
    }
    {
      std::ofstream out = open_output(fs::path(out_dir) / "signs.csv");
      out << "t,sigma\n";
      for (std::size_t t = 0; t < result.rep0_signs.size(); ++t) {
        out << (t + 1) << ',' << (result.rep0_signs[t] > 0 ? 1 : -1) << '\n';
      }
    }
  }
  std::cout << "mean regret over " << cfg.reps << " repetitions: "
            << pogd::format_g17(result.mean_regret) << "\n"
            << "G_T = " << pogd::format_g17(result.final_energy)
            << ", adversarial floor " << pogd::format_g17(result.lower_sum)
            << ", calibrated threshold " << pogd::format_g17(result.threshold)
            << "\n"
            << (result.pass ? "floor cleared" : "FLOOR MISSED") << '\n';
  return result.pass ? kExitOk : kExitViolation;
}

int cmd_trace_ineq(const pogd::TraceIneqStudyConfig& cfg,
                   const std::string& out_dir) {
  const std::vector<pogd::TraceIneqSample> samples =
      pogd::trace_inequality_study(cfg);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out = open_output(fs::path(out_dir) / "trace_ineq.csv");
    out << "sample,n,t,family,lhs,rhs,ratio,sqrt_n\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const pogd::TraceIneqSample& s = samples[i];
      out << i << ',' << s.dim << ',' << s.horizon << ',' << s.family << ','
          << pogd::format_g17(s.lhs) << ',' << pogd::format_g17(s.rhs) << ','
          << pogd::format_g17(s.ratio) << ','
          << pogd::format_g17(std::sqrt(static_cast<double>(s.dim))) << '\n';
    }
  }
  std::map<std::size_t, std::pair<double, double>> ranges;
  bool in_range = true;
  for (const pogd::TraceIneqSample& s : samples) {
    auto [it, fresh] = ranges.try_emplace(s.dim, s.ratio, s.ratio);
    if (!fresh) {
      it->second.first = std::min(it->second.first, s.ratio);
      it->second.second = std::max(it->second.second, s.ratio);
    }
    const double root_n = std::sqrt(static_cast<double>(s.dim));
    if (s.ratio < 1.0 - 1e-10 || s.ratio > root_n + 1e-10) in_range = false;
  }
  for (const auto& [n, range] : ranges) {
    std::cout << "N=" << n << ": ratio in [" << pogd::format_g17(range.first)
              << ", " << pogd::format_g17(range.second) << "], limit "
              << pogd::format_g17(std::sqrt(static_cast<double>(n))) << '\n';
  }
  std::cout << (in_range ? "all ratios within [1, sqrt(N)]"
                         : "RATIO OUT OF RANGE")
            << '\n';
  return in_range ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projected online sub-gradient descent experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> reps_override;

  CLI::App* run_cmd = app.add_subcommand("run", "run a configured experiment");
  run_cmd->add_option("--config", config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--seed", seed_override, "override run.seed");
  run_cmd->add_option("--reps", reps_override, "override run.reps");

  std::string scale = "small";
  std::string verify_out;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the verification suite");
  verify_cmd->add_option("--scale", scale, "small or full")
      ->check(CLI::IsMember({"small", "full"}));
  verify_cmd->add_option("--out", verify_out, "directory for verify.csv");

  pogd::LowerBoundStudyConfig lb_cfg;
  std::string lb_out;
  CLI::App* lb_cmd = app.add_subcommand(
      "lower-bound", "Monte Carlo adversarial regret study");
  lb_cmd->add_option("--dim", lb_cfg.dim, "ball dimension");
  lb_cmd->add_option("--radius", lb_cfg.radius, "ball radius");
  lb_cmd->add_option("--scale", lb_cfg.scale, "gradient norm");
  lb_cmd->add_option("--horizon", lb_cfg.horizon, "rounds per repetition");
  lb_cmd->add_option("--reps", lb_cfg.reps, "repetitions");
  lb_cmd->add_option("--seed", lb_cfg.seed, "base seed");
  lb_cmd->add_option("--out", lb_out, "directory for lower_bound.csv/signs.csv");

  pogd::TraceIneqStudyConfig ti_cfg;
  std::string ti_out;
  CLI::App* ti_cmd = app.add_subcommand(
      "trace-ineq", "gradient energy vs outer-product trace study");
  ti_cmd->add_option("--dims", ti_cfg.dims, "dimensions to sample");
  ti_cmd->add_option("--samples", ti_cfg.samples, "number of accumulations");
  ti_cmd->add_option("--max-horizon", ti_cfg.max_horizon, "max gradients per accumulation");
  ti_cmd->add_option("--seed", ti_cfg.seed, "base seed");
  ti_cmd->add_option("--out", ti_out, "directory for trace_ineq.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(config_path, out_dir, seed_override, reps_override);
    }
    if (verify_cmd->parsed()) return cmd_verify(scale, verify_out);
    if (lb_cmd->parsed()) return cmd_lower_bound(lb_cfg, lb_out);
    if (ti_cmd->parsed()) return cmd_trace_ineq(ti_cfg, ti_out);
  } catch (const pogd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
