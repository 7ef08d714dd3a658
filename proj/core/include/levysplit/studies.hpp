#pragma once

#include <string>
#include <vector>

#include "levysplit/config.hpp"
#include "levysplit/report.hpp"

namespace levysplit {

struct StudyInfo {
  std::string name;
  std::string description;
  std::string pinned;  // config text whose keys the study fixes
};

const std::vector<StudyInfo>& named_studies();
// Case-insensitive lookup; nullptr when unknown.
const StudyInfo* find_study(const std::string& name);

// The named study's pinned keys overlaid with the user's keys. Changing a
// pinned value requires allow_override. Unknown study names are rejected;
// "convergence", "single-price" and "cross-check" without pins pass through.
Config resolve_study_config(const std::string& name, const Config& user, bool allow_override);

// Replaces kou.lambda = resolve by the resolved number.
Config freeze_resolved_parameters(const Config& c);

// Prices every rung of `ladder` (grid.n values) for each entry of `series`
// (jump methods), then attaches the reference price and beta column.
ConvergenceReport run_convergence(const Config& c, const std::string& study_name = "convergence");

struct CrossCheckResult {
  std::string oracle;
  double engine = 0.0;
  double reference = 0.0;
  double rel_error = 0.0;
  PricingDiagnostics diagnostics;
  std::string to_json() const;
};

// Engine price against black-scholes, merton-series or carr-madan
// (cross_check.oracle, default picked from the model).
CrossCheckResult run_cross_check(const Config& c);

}  // namespace levysplit
