#pragma once

#include "curvkit/io.hpp"

namespace curvkit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;  // one line, deterministic
  Json data;            // measured quantities, deterministic
  double seconds = 0;   // wall time (kept out of the report)
  double budget = 0;    // expected wall time
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
  std::vector<int> only;  // criteria 1..9 (empty: all)
  std::function<void(const std::string&)> progress;
};

// The deterministic acceptance battery (criteria 1-9).  Criterion 10 is the
// byte comparison of two reports and is left to the callers.
std::vector<CriterionResult> run_suite(const SuiteOptions& opt = {});

// Deterministic JSON report (no timings).
Json suite_report(const std::vector<CriterionResult>& results, const SuiteOptions& opt);

}  // namespace curvkit
