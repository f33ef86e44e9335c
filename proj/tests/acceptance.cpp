// Acceptance gate: runs the full criterion suite at the documented sample
// counts and prints one pass/fail line per criterion.
#include <cstdio>

#include "gitkit/verify.hpp"

int main() {
  gitkit::VerifyOptions opts;
  opts.seed = 1;
  opts.samples = 500;  // full documented scale
  std::vector<gitkit::CheckResult> results = gitkit::run_acceptance(opts);
  int failures = 0;
  for (const gitkit::CheckResult& r : results) {
    std::printf("%s %-40s worst=%.3e %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.worst,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}
