#pragma once

// End-to-end acceptance suite: ten numbered criteria, each with a measured
// runtime and a one-line report. Shared by `ffire verify` and the ctest gate.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ffire::acceptance {

struct Options {
  /// Reduced sample sizes; Monte Carlo thresholds are widened to the DKW
  /// radius at alpha = 1e-3 when that exceeds the full-scale threshold.
  bool quick = false;
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
};

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  /// Measured quantities and thresholds.
  std::string detail;
  double seconds;
  double time_limit_seconds;
};

using Reporter = std::function<void(const CriterionResult&)>;

/// Runs every criterion in order; `report` (if set) is called as each finishes.
std::vector<CriterionResult> run_all(const Options& options, const Reporter& report = {});

/// "[PASS] 3 monte-carlo-vs-exact (12.3 s / 60 s): ..." style line.
std::string format_line(const CriterionResult& r);

}  // namespace ffire::acceptance
