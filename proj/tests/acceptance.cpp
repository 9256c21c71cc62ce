// Runs every reference check at its stated tolerance and prints one line per
// check. Exit status is nonzero if any check fails.

#include "wgd/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  wgd::VerifyOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (int id = 1; id <= 11; ++id) {
    const wgd::CheckResult r = wgd::run_check(id, opts);
    std::printf("[%s] %2d %s: %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str(),
                r.seconds);
    std::fflush(stdout);
    if (!r.passed) {
      ++failed;
      if (!r.details.is_null()) std::printf("       details: %s\n", r.details.dump().c_str());
    }
  }
  std::printf("%d of 11 checks passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
