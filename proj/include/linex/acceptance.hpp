#pragma once

// Acceptance criteria as runnable checks, grouped into suites for the CLI
// `verify` command and the acceptance binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace linex {

struct AcceptanceConfig {
  std::uint64_t seed = 0;
};

struct CheckResult {
  int id = 0;
  std::string name;
  std::string suite;
  bool pass = false;
  long instances = 0;
  long failures = 0;
  std::string detail;  // JSON object with per-part counts
  double seconds = 0;
  std::string to_json() const;
};

struct Criterion {
  int id;
  std::string name;
  std::string suite;  // fourier | spectra | families | extremal
  std::function<CheckResult(const AcceptanceConfig&)> run;
};

const std::vector<Criterion>& acceptance_criteria();
std::vector<std::string> suite_names();  // including "all"

/// Runs every criterion of `suite` in id order; throws DomainError for an
/// unknown suite. `on_result` sees each result as soon as it is available.
std::vector<CheckResult> run_suite(const std::string& suite, const AcceptanceConfig& cfg,
                                   const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace linex
