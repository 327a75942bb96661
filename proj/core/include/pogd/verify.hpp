#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pogd {

enum class VerifyScale { kSmall, kFull };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
};

// End-to-end guarantee checks, one result per criterion:
//
//   1 adaptive bound soundness over a seeded sweep of sets/streams/comparators
//   2 constant-oracle bound soundness over the same sweep (tuning pass first)
//   3 the exact sqrt(2) identity between the adaptive and constant bounds
//   4 static special case: regret vs best fixed grid point under sqrt(2) D G_T
//   5 brute-force worst in-class comparator stays under the adaptive bound
//   6 energy-vs-trace comparison with ratio in [1, sqrt(N)]
//   7 doubling-reset schedule: both printed bounds dominate realized regret
//   8 Monte Carlo adversarial floor for Rademacher streams
//   9 per-coordinate bound improvement and engine soundness on skewed boxes
//  10 byte-identical reruns and prefix-replay causality
//
// kSmall finishes in well under a minute; kFull runs the reference scales.
VerifyReport verify_suite(VerifyScale scale, std::ostream* progress = nullptr);

void print_verify_report(const VerifyReport& report, std::ostream& os);

}  // namespace pogd
