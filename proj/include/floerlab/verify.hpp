#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace floerlab {

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  std::string error;  // set when the suite aborted with an exception
  bool passed = false;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;
  bool passed = false;
};

/// heron, symplectic, chart, loopspace, action, fredholm
const std::vector<std::string>& suite_names();

/// Runs the invariant suites (all of them when `only` is empty). Throws
/// InvalidInput for an unknown suite name.
VerifyReport run_verify(std::uint64_t seed, const std::vector<std::string>& only = {});

}  // namespace floerlab
