// Acceptance suite: runs every verification criterion at the reference
// scale and prints one pass/fail line per criterion. Exits nonzero when any
// criterion fails. `--small` switches to the quick scale used for smoke
// checks.
#include <cstring>
#include <iostream>

#include "pogd/verify.hpp"

int main(int argc, char** argv) {
  pogd::VerifyScale scale = pogd::VerifyScale::kFull;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--small") == 0) {
      scale = pogd::VerifyScale::kSmall;
    } else {
      std::cerr << "usage: " << argv[0] << " [--small]\n";
      return 2;
    }
  }
  const pogd::VerifyReport report = pogd::verify_suite(scale, &std::cout);
  std::cout << (report.all_pass() ? "all criteria passed" : "CRITERIA FAILED")
            << std::endl;
  return report.all_pass() ? 0 : 1;
}
