#pragma once

#include <string>
#include <vector>

#include "gitkit/stability.hpp"

namespace gitkit {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed slack or residual
  std::string detail;
};

struct VerifyOptions {
  unsigned long long seed = 1;
  long samples = 500;  // baseline per-invariant sample count
  AuditMode mode = AuditMode::parallel;
};

/// Property suite behind `gitkit verify`: every module's invariant block.
std::vector<CheckResult> run_invariants(const VerifyOptions& opts);

/// The acceptance gate: one result per numbered criterion.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts);

}  // namespace gitkit
